//! Command-line laboratory around `riesz-core`: file formats, run
//! configuration, violation search, bound tables and the invariant suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod figures;
pub mod formats;
pub mod search;
pub mod selftest;

pub use error::{LabError, Result};
