//! Norm functionals on grid samples, the nonlinear map `N_p`, conjugate
//! exponents, and the reference exponent and operator-norm functions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fourier::GridFunction;
use crate::numeric::pairwise_map_sum;

/// Samples with modulus below this value enter the geometric mean as
/// `ln(LOG_FLOOR)`.
pub const LOG_FLOOR: f64 = 1e-300;

/// Exponent of a norm: `p = 0` (geometric mean), finite `p > 0`, or `p = infinity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormExponent {
    GeometricMean,
    Finite(f64),
    Infinity,
}

impl NormExponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p > 0.0 && p.is_finite() {
            Ok(Self::Finite(p))
        } else {
            Err(Error::InvalidExponent {
                value: p,
                reason: "finite exponent must be positive",
            })
        }
    }

    /// `0` maps to the geometric mean and `+inf` to the sup norm.
    pub fn from_f64(p: f64) -> Result<Self> {
        if p == 0.0 {
            Ok(Self::GeometricMean)
        } else if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else {
            Self::finite(p)
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::GeometricMean => 0.0,
            Self::Finite(p) => p,
            Self::Infinity => f64::INFINITY,
        }
    }
}

/// A Hölder pair `(q, q*)` with `1 < q <= infinity`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair {
    q: f64,
    q_star: f64,
}

impl ExponentPair {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_nan() || q <= 1.0 {
            return Err(Error::InvalidExponent {
                value: q,
                reason: "q must lie in (1, infinity]",
            });
        }
        Ok(Self {
            q,
            q_star: conjugate(q)?,
        })
    }

    /// The pair whose conjugate exponent is `q_star >= 1` (`q_star = 1` gives `q = infinity`).
    pub fn from_conjugate(q_star: f64) -> Result<Self> {
        if q_star.is_nan() || q_star < 1.0 || q_star.is_infinite() {
            return Err(Error::InvalidExponent {
                value: q_star,
                reason: "q* must lie in [1, infinity)",
            });
        }
        Ok(Self {
            q: conjugate(q_star)?,
            q_star,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn q_star(&self) -> f64 {
        self.q_star
    }
}

/// `q/(q-1)`, with `1* = infinity` and `infinity* = 1`.
pub fn conjugate(q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent {
            value: q,
            reason: "conjugate exponent needs q >= 1",
        });
    }
    Ok(if q == 1.0 {
        f64::INFINITY
    } else if q.is_infinite() {
        1.0
    } else {
        q / (q - 1.0)
    })
}

/// `||g||_p` with respect to the normalized grid measure.
///
/// Finite `p` is computed as `m (mean (|g|/m)^p)^(1/p)` with `m = max |g|`
/// so large exponents do not overflow.
pub fn lp_norm(g: &GridFunction, p: NormExponent) -> Result<f64> {
    if g.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let count = g.len() as f64;
    match p {
        NormExponent::Infinity => Ok(g.max_abs()),
        NormExponent::Finite(p) => {
            let m = g.max_abs();
            if m == 0.0 {
                return Ok(0.0);
            }
            if p == 2.0 {
                let s = pairwise_map_sum(g.samples(), |z| (z / m).norm_sqr());
                return Ok(m * (s / count).sqrt());
            }
            let s = pairwise_map_sum(g.samples(), |z| (z.norm() / m).powf(p));
            Ok(m * (s / count).powf(1.0 / p))
        }
        NormExponent::GeometricMean => {
            if g.samples().iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                return Err(Error::AllZero);
            }
            let s = pairwise_map_sum(g.samples(), |z| z.norm().max(LOG_FLOOR).ln());
            Ok((s / count).exp())
        }
    }
}

/// `N_p g = |g|^(p-2) g`, with `N_p g = 0` where `g = 0`.
pub fn nonlinear_map(g: &GridFunction, p: f64) -> GridFunction {
    g.map(|z| {
        let r = z.norm();
        if r == 0.0 {
            Complex64::new(0.0, 0.0)
        } else if p == 2.0 {
            z
        } else {
            z * r.powf(p - 2.0)
        }
    })
}

/// The conjectured critical exponent `a_d(q) = 2 + 2/(d + 2/(q-2))`, defined for
/// `q >= 2d/(d+1)`.
///
/// It satisfies `1/(a_d(q) - 2) = d/2 + 1/(q - 2)`, which is how it is
/// evaluated away from the removable points.
pub fn conjectured_exponent(d: u32, q: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if q.is_nan() {
        return Err(Error::InvalidExponent {
            value: q,
            reason: "q is NaN",
        });
    }
    let d = d as f64;
    let q_min = 2.0 * d / (d + 1.0);
    // Values computed by composing the function may sit an ulp below q_min.
    if q < q_min * (1.0 - 1e-13) {
        return Err(Error::InvalidExponent {
            value: q,
            reason: "q below 2d/(d+1), where the conjectured value is -1",
        });
    }
    if q.is_infinite() {
        return Ok(2.0 + 2.0 / d);
    }
    if q == 2.0 {
        return Ok(2.0);
    }
    if d == 1.0 {
        return Ok(4.0 * (1.0 - 1.0 / q));
    }
    Ok(2.0 + 2.0 / (d + 2.0 / (q - 2.0)))
}

/// `||P_+||_{L^q -> L^q}` on `T^d`, equal to `sin(pi/q)^(-d)`.
pub fn hv_norm(q: f64, d: u32) -> Result<f64> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::InvalidExponent {
            value: q,
            reason: "operator norm needs 1 < q < infinity",
        });
    }
    Ok((PI / q).sin().powi(d as i32).recip())
}

/// Lower bound for the critical exponent on the circle obtained by
/// interpolation: `4q/(q+2)` for `q >= 2`, `2q/(4-q)` on `[4/3, 2]`, and the
/// trivial bound `0` for `1 <= q < 4/3`.
pub fn interpolation_lower_bound(q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent {
            value: q,
            reason: "q must be at least 1",
        });
    }
    Ok(if q.is_infinite() {
        4.0
    } else if q >= 2.0 {
        4.0 * q / (q + 2.0)
    } else if q >= 4.0 / 3.0 {
        2.0 * q / (4.0 - q)
    } else {
        0.0
    })
}

/// One row of a bound table. Sources are short stable tags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub q: f64,
    pub upper: f64,
    pub lower: f64,
    pub upper_source: &'static str,
    pub lower_source: &'static str,
}

/// Known upper and lower bounds for the critical exponent in dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTable {
    pub d: u32,
    pub rows: Vec<BoundRow>,
}

/// Default abscissae: `q = 4/(4 - x)` for `x = 0, 1/8, ..., 4`, so that the
/// breakpoints `1, 4/3, 8/5, 2, infinity` are hit exactly.
pub fn default_bound_abscissae() -> Vec<f64> {
    (0..=32)
        .map(|i| {
            let x = i as f64 / 8.0;
            if i == 32 {
                f64::INFINITY
            } else {
                4.0 / (4.0 - x)
            }
        })
        .collect()
}

fn bound_row(d: u32, q: f64) -> Result<BoundRow> {
    match d {
        1 => {
            let upper = conjectured_exponent(1, q)?;
            let lower = interpolation_lower_bound(q)?;
            let lower_source = if q < 4.0 / 3.0 {
                "l1_geometric_mean"
            } else if q < 2.0 {
                "interpolation_dual"
            } else {
                "interpolation_2_inf"
            };
            Ok(BoundRow {
                q,
                upper,
                lower,
                upper_source: "rpk_kernel",
                lower_source,
            })
        }
        2 => {
            if q < 4.0 / 3.0 {
                return Ok(BoundRow {
                    q,
                    upper: -1.0,
                    lower: -1.0,
                    upper_source: "homog2_geometric_mean",
                    lower_source: "homog2_geometric_mean",
                });
            }
            let upper = conjectured_exponent(2, q)?;
            // Compose the one-dimensional lower bound with itself.
            let inner = interpolation_lower_bound(q)?;
            let (lower, lower_source) = if inner < 4.0 / 3.0 {
                (0.0, "endpoint_zero")
            } else {
                (interpolation_lower_bound(inner)?, "holder_chain")
            };
            Ok(BoundRow {
                q,
                upper,
                lower,
                upper_source: "homog2_family",
                lower_source,
            })
        }
        _ => Err(Error::UnsupportedDimension {
            supported: 2,
            found: d as usize,
        }),
    }
}

/// Bound table for `d` in `{1, 2}` at the given `q >= 1`.
pub fn bound_table(d: u32, qs: &[f64]) -> Result<BoundTable> {
    let rows = qs
        .iter()
        .map(|&q| bound_row(d, q))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundTable { d, rows })
}
