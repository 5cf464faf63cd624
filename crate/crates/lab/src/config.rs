//! Run configuration, read from a TOML file of `key = value` lines and then
//! overridden by command-line flags.

use std::path::{Path, PathBuf};

use riesz_core::SeriesControl;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Grid points per axis; when unset the per-dimension defaults apply.
    pub grid: Option<usize>,
    pub grid_1d: usize,
    pub grid_2d: usize,
    pub grid_3d: usize,
    pub tol: f64,
    pub series_max_terms: usize,
    pub series_rel_tol: f64,
    pub seed: u64,
    /// Random starting candidates per search.
    pub budget: usize,
    pub ascent_sweeps: usize,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: None,
            grid_1d: 256,
            grid_2d: 128,
            grid_3d: 32,
            tol: 1e-10,
            series_max_terms: 200,
            series_rel_tol: 1e-16,
            seed: 0,
            budget: 32,
            ascent_sweeps: 4,
            out: None,
            format: None,
        }
    }
}

/// Values given on the command line; `None` keeps the configured value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self> {
        if o.grid.is_some() {
            self.grid = o.grid;
        }
        if let Some(t) = o.tol {
            self.tol = t;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(b) = o.budget {
            self.budget = b;
        }
        if o.out.is_some() {
            self.out.clone_from(&o.out);
        }
        if o.format.is_some() {
            self.format = o.format;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let grids = [
            Some(self.grid_1d),
            Some(self.grid_2d),
            Some(self.grid_3d),
            self.grid,
        ];
        for n in grids.into_iter().flatten() {
            if n < 4 || !n.is_power_of_two() {
                return Err(LabError::invalid(format!(
                    "grid size {n} must be a power of two >= 4"
                )));
            }
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(LabError::invalid("tol must be positive"));
        }
        if self.budget == 0 {
            return Err(LabError::invalid("budget must be at least 1"));
        }
        self.series()?;
        Ok(())
    }

    pub fn series(&self) -> Result<SeriesControl> {
        Ok(SeriesControl::new(
            self.series_max_terms,
            self.series_rel_tol,
        )?)
    }

    /// Grid points per axis for dimension `d`.
    pub fn grid_for(&self, d: usize) -> usize {
        self.grid.unwrap_or(match d {
            1 => self.grid_1d,
            2 => self.grid_2d,
            _ => self.grid_3d,
        })
    }
}
