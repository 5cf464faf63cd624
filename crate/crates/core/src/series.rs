//! Truncated summation of slowly varying power series with a tail estimate.

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

/// Truncation policy for the binomial series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 200,
            rel_tol: 1e-16,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::OutOfDomain("max_terms must be at least 1"));
        }
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::OutOfDomain("rel_tol must lie in (0, 1)"));
        }
        Ok(Self { max_terms, rel_tol })
    }
}

/// A truncated series together with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Number of terms summed.
    pub terms: usize,
    /// Bound on the omitted tail of the underlying sum.
    pub tail_bound: f64,
    pub converged: bool,
}

impl SeriesValue {
    /// The value, or an error if the term budget ran out first.
    pub fn require(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::SeriesNonConvergence {
                terms: self.terms,
                last_term: self.tail_bound,
            })
        }
    }

    pub fn map<F: FnOnce(f64) -> f64>(self, f: F) -> Self {
        Self {
            value: f(self.value),
            ..self
        }
    }
}

/// Sums `term(0) + term(1) + ...`.
///
/// Stops once a term is below `rel_tol` times the running sum while the terms
/// are decreasing. The tail is bounded geometrically by `t rho / (1 - rho)`
/// where `rho` is the larger of the last observed term ratio and
/// `limit_ratio` (the series' asymptotic ratio). Callers pass terms with a
/// monotone ratio sequence, which makes this a true bound.
pub fn sum_series<F: FnMut(usize) -> f64>(
    ctl: &SeriesControl,
    limit_ratio: f64,
    mut term: F,
) -> SeriesValue {
    let mut acc = CompensatedSum::new();
    let mut prev = f64::NAN;
    for n in 0..ctl.max_terms {
        let t = term(n);
        acc.add(t);
        let sum = acc.value();
        if t == 0.0 && n > 0 {
            // Binomials with a nonnegative integer top vanish from here on.
            if prev == 0.0 || limit_ratio < 1.0 {
                return SeriesValue {
                    value: sum,
                    terms: n + 1,
                    tail_bound: 0.0,
                    converged: true,
                };
            }
        }
        let ratio = if prev.is_nan() || prev == 0.0 {
            f64::INFINITY
        } else {
            (t / prev).abs()
        };
        if n > 0 && ratio < 1.0 && t.abs() <= ctl.rel_tol * sum.abs() {
            let rho = ratio.max(limit_ratio);
            let tail_bound = if rho < 1.0 {
                t.abs() * rho / (1.0 - rho)
            } else {
                f64::INFINITY
            };
            return SeriesValue {
                value: sum,
                terms: n + 1,
                tail_bound,
                converged: rho < 1.0,
            };
        }
        prev = t;
    }
    SeriesValue {
        value: acc.value(),
        terms: ctl.max_terms,
        tail_bound: prev.abs(),
        converged: false,
    }
}
