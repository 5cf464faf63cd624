//! Numerical core for Riesz projections on the torus `T^d`.
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! - [`fourier`]: sparse trigonometric polynomials, sampled grid functions,
//!   spectral conversions and the Riesz projections `P_+`, `P_-`;
//! - [`norms`]: `L^p` norms for `0 <= p <= infinity`, the map `N_p`,
//!   conjugate exponents and the reference exponent/bound functions;
//! - [`rpk`]: exact binomial-series evaluation for the reproducing-kernel
//!   family `k_w`;
//! - [`extremal`]: inner/outer factorization on the circle, the `L^1`
//!   geometric-mean inequality and a solver for the dual extremal problem;
//! - [`homog2`]: the 2-homogeneous family on `T^2` and its series;
//! - [`dirichlet`]: spherical Dirichlet kernels and their growth.
//!
//! Reductions use a fixed summation tree, so results do not depend on thread
//! scheduling in callers.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dirichlet;
pub mod error;
pub mod extremal;
pub mod fft;
pub mod fourier;
pub mod homog2;
pub mod norms;
pub mod numeric;
pub mod rpk;
pub mod series;

pub use error::{Error, Result};
pub use fourier::{
    all_coefficients, coefficients, sample, sample_shifted, GridFunction, GridShift, MultiIndex,
    Projected, Spectrum, TrigPoly,
};
pub use norms::{ExponentPair, NormExponent};
pub use series::{SeriesControl, SeriesValue};

pub use num_complex::Complex64;
