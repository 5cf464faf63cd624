use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("operation supports dimension {supported} only, got {found}")]
    UnsupportedDimension { supported: usize, found: usize },

    #[error("grid size {0} is not a power of two >= 2")]
    GridNotPowerOfTwo(usize),

    #[error("grid size {n} too small for bandwidth, need at least {required}")]
    GridTooSmall { n: usize, required: usize },

    #[error("cutoff {cutoff} must be below n/2 = {half}")]
    CutoffTooLarge { cutoff: usize, half: usize },

    #[error("sample buffer has length {found}, expected {expected}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("axis {axis} out of range for dimension {dim}")]
    InvalidAxis { axis: usize, dim: usize },

    #[error("empty axis selection")]
    EmptyAxes,

    #[error("empty grid")]
    EmptyGrid,

    #[error("geometric mean of an identically zero function")]
    AllZero,

    #[error("invalid exponent {value}: {reason}")]
    InvalidExponent { value: f64, reason: &'static str },

    #[error("parameter out of domain: {0}")]
    OutOfDomain(&'static str),

    #[error("point {0} is not inside the open unit disc")]
    OutsideDisc(f64),

    #[error("modulus must be strictly positive on the grid")]
    NonPositiveModulus,

    #[error("lattice point count exceeds cap {cap}")]
    LatticeCap { cap: usize },

    #[error("series did not converge after {terms} terms (last term {last_term:e})")]
    SeriesNonConvergence { terms: usize, last_term: f64 },

    #[error("series and closed form disagree: relative gap {gap:e}")]
    SeriesMismatch { gap: f64 },

    #[error("solver did not converge in {iterations} iterations (duality gap {gap:e})")]
    SolverNonConvergence { iterations: usize, gap: f64 },

    #[error("root finder did not converge")]
    RootNonConvergence,
}

impl Error {
    /// True for the iterative failures (series, solver, root finding).
    pub fn is_nonconvergence(&self) -> bool {
        matches!(
            self,
            Error::SeriesNonConvergence { .. }
                | Error::SolverNonConvergence { .. }
                | Error::RootNonConvergence
                | Error::SeriesMismatch { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
