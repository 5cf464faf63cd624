//! Dual extremal problems, the `L^1` geometric-mean inequality and
//! inner/outer factorization on the circle.

mod dual;
mod factor;
mod l1;
mod roots;

pub use dual::{
    dual_extremal_solve, dual_extremal_solve_with, dual_lower_bound, truncation_drift,
    ExtremalTriple, SolverDiagnostics, SolverOptions, Q_RANGE,
};
pub use factor::{
    blaschke_factor, blaschke_inner, blaschke_inner_shifted, factorize, outer_from_modulus,
    Factorization,
};
pub use l1::{
    holderme_check, l1_equality_certificate, theorem_l1_check, GeometricMeanMethod, L1Certificate,
    L1Check, CERTIFICATE_TOL,
};
pub use roots::{jensen_log_mean, polynomial_geometric_mean, polynomial_roots};
