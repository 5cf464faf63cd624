//! The 2-homogeneous family `f = z1 z2 + eps (z1^2 - z2^2)` on `T^2`.
//!
//! Because `conj(f1) f2` is purely imaginary, `|f|^2 = 1 + eps^2 |f2|^2`, and
//! every norm of `psi = N_{q*} f` and of `phi = P_+ psi = a f1 + eps b f2`
//! reduces to a binomial series in `eps^2` weighted by the central binomial
//! moments `||f2||_{2j}^{2j} = binom(2j, j)`. Values close to 1 are carried as
//! excesses (`value - 1`) so that the small `eps^4` differences survive.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fourier::{all_coefficients, sample, GridFunction, TrigPoly};
use crate::norms::{conjugate, lp_norm, nonlinear_map, NormExponent};
use crate::series::{sum_series, SeriesControl, SeriesValue};

/// Default grid size per axis for sampled quantities.
pub const DEFAULT_GRID: usize = 128;

/// Largest `b eps / a` for which the `phi` series is summed.
const PHI_RATIO_GUARD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Homog2Family {
    eps: f64,
    q_star: f64,
    ctl: SeriesControl,
}

impl Homog2Family {
    pub fn new(eps: f64, q_star: f64, ctl: SeriesControl) -> Result<Self> {
        if !(eps > 0.0 && eps < 0.25) {
            return Err(Error::OutOfDomain("eps must lie in (0, 1/4)"));
        }
        if !(q_star >= 1.0 && q_star.is_finite()) {
            return Err(Error::InvalidExponent {
                value: q_star,
                reason: "q* must lie in [1, infinity)",
            });
        }
        Ok(Self { eps, q_star, ctl })
    }

    /// Family indexed by `q` in `(1, infinity]` instead of `q*`.
    pub fn from_q(eps: f64, q: f64, ctl: SeriesControl) -> Result<Self> {
        if !(q > 1.0) {
            return Err(Error::InvalidExponent {
                value: q,
                reason: "q must exceed 1",
            });
        }
        Self::new(eps, conjugate(q)?, ctl)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn q_star(&self) -> f64 {
        self.q_star
    }

    /// `q` conjugate to `q*` (infinite for `q* = 1`).
    pub fn q(&self) -> f64 {
        if self.q_star == 1.0 {
            f64::INFINITY
        } else {
            self.q_star / (self.q_star - 1.0)
        }
    }

    pub fn ctl(&self) -> &SeriesControl {
        &self.ctl
    }

    /// `f = f1 + eps f2`.
    pub fn poly(&self) -> TrigPoly {
        family_poly(self.eps)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `z1 z2 + eps (z1^2 - z2^2)`.
pub fn family_poly(eps: f64) -> TrigPoly {
    TrigPoly::from_terms(
        2,
        [([1i64, 1], c(1.0)), ([2, 0], c(eps)), ([0, 2], c(-eps))],
    )
    .expect("dimension is fixed")
}

/// `f` and `psi = N_{q*} f` sampled on an `n x n` grid.
pub fn build_family(fam: &Homog2Family, n: usize) -> Result<(TrigPoly, GridFunction)> {
    let f = fam.poly();
    let psi = nonlinear_map(&sample(&f, n)?, fam.q_star);
    Ok((f, psi))
}

/// `||f2||_{2j}^{2j} = binom(2j, j)`.
pub fn f2_even_norms(j: u32) -> f64 {
    (1..=j).fold(1.0, |acc, i| acc * (j + i) as f64 / i as f64)
}

/// `sum_{j >= start} binom(alpha, j) m_j x^j` where `m_j = binom(2j, j)`, or
/// `binom(2j+1, j+1)` when `odd` is set. Both moments grow like `4^j`.
fn moment_series(alpha: f64, x: f64, start: usize, odd: bool, ctl: &SeriesControl) -> SeriesValue {
    let mut term = 1.0;
    let mut j = 0usize;
    sum_series(ctl, 4.0 * x, |n| {
        while j < n + start {
            let jf = j as f64;
            let growth = if odd {
                2.0 * (2.0 * jf + 3.0) / (jf + 2.0)
            } else {
                2.0 * (2.0 * jf + 1.0) / (jf + 1.0)
            };
            term *= (alpha - jf) / (jf + 1.0) * growth * x;
            j += 1;
        }
        term
    })
}

fn require(s: SeriesValue) -> Result<SeriesValue> {
    s.require()?;
    Ok(s)
}

/// A norm close to 1, with its excess `value - 1` computed without
/// cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearOne {
    pub value: f64,
    pub excess: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

impl NearOne {
    fn from_log(log: f64, terms: usize, tail_bound: f64) -> Self {
        let excess = log.exp_m1();
        Self {
            value: 1.0 + excess,
            excess,
            terms,
            tail_bound,
        }
    }

    fn log(&self) -> f64 {
        self.excess.ln_1p()
    }
}

/// `||psi||_q` from `||psi||_q^q = sum_j binom(q*/2, j) binom(2j, j) eps^(2j)`.
pub fn psi_norm_series(fam: &Homog2Family) -> Result<NearOne> {
    if fam.q_star == 1.0 {
        return Ok(NearOne {
            value: 1.0,
            excess: 0.0,
            terms: 0,
            tail_bound: 0.0,
        });
    }
    let x = fam.eps * fam.eps;
    let s = require(moment_series(fam.q_star / 2.0, x, 1, false, &fam.ctl))?;
    let q = fam.q();
    Ok(NearOne::from_log(
        s.value.ln_1p() / q,
        s.terms,
        s.tail_bound,
    ))
}

/// Coefficients of `P_+ psi = a f1 + eps b f2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ABCoefficients {
    pub a: f64,
    pub b: f64,
    /// `a - 1` and `b - 1`.
    pub a_excess: f64,
    pub b_excess: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

pub fn ab_series(fam: &Homog2Family) -> Result<ABCoefficients> {
    let x = fam.eps * fam.eps;
    let alpha = fam.q_star / 2.0 - 1.0;
    let a = require(moment_series(alpha, x, 1, false, &fam.ctl))?;
    let b = require(moment_series(alpha, x, 1, true, &fam.ctl))?;
    Ok(ABCoefficients {
        a: 1.0 + a.value,
        b: 1.0 + b.value,
        a_excess: a.value,
        b_excess: b.value,
        terms: a.terms.max(b.terms),
        tail_bound: a.tail_bound.max(b.tail_bound),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiMethod {
    Series,
    Quadrature { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiNorm {
    pub norm: NearOne,
    pub method: PhiMethod,
}

/// `||phi||_p` for `phi = a f1 + eps b f2`.
///
/// Uses `|phi|^2 = a^2 (1 + x |f2|^2)` with `x = (b eps / a)^2`: the series
/// `sum binom(p/2, j) binom(2j, j) x^j` for finite `p`, the logarithmic
/// series for the geometric mean and `sup |phi| = sqrt(a^2 + 4 eps^2 b^2)`.
/// Outside `b eps / a < 1/2` the norm is integrated on a grid.
pub fn phi_norm_series(fam: &Homog2Family, p: NormExponent) -> Result<PhiNorm> {
    let ab = ab_series(fam)?;
    let ratio = ab.b * fam.eps / ab.a;
    if !(ratio < PHI_RATIO_GUARD) {
        return phi_norm_quadrature(fam, &ab, p, 2 * DEFAULT_GRID);
    }
    let x = ratio * ratio;
    let log_a = ab.a_excess.ln_1p();
    let (log_rel, terms, tail) = match p {
        NormExponent::Infinity => ((4.0 * x).ln_1p() / 2.0, 0, 0.0),
        NormExponent::Finite(p) => {
            let s = require(moment_series(p / 2.0, x, 1, false, &fam.ctl))?;
            (s.value.ln_1p() / p, s.terms, s.tail_bound)
        }
        NormExponent::GeometricMean => {
            // sum_{j>=1} (-1)^(j+1)/j binom(2j, j) x^j, by the ratio recurrence.
            let mut term = 0.0;
            let s = require(sum_series(&fam.ctl, 4.0 * x, |n| {
                let j = (n + 1) as f64;
                term = if n == 0 {
                    2.0 * x
                } else {
                    -term * (j - 1.0) / j * 2.0 * (2.0 * j - 1.0) / j * x
                };
                term
            }))?;
            (s.value / 2.0, s.terms, s.tail_bound)
        }
    };
    Ok(PhiNorm {
        norm: NearOne::from_log(log_a + log_rel, terms, tail),
        method: PhiMethod::Series,
    })
}

fn phi_norm_quadrature(
    fam: &Homog2Family,
    ab: &ABCoefficients,
    p: NormExponent,
    n: usize,
) -> Result<PhiNorm> {
    let phi = TrigPoly::from_terms(
        2,
        [
            ([1i64, 1], c(ab.a)),
            ([2, 0], c(fam.eps * ab.b)),
            ([0, 2], c(-fam.eps * ab.b)),
        ],
    )?;
    let v = lp_norm(&sample(&phi, n)?, p)?;
    Ok(PhiNorm {
        norm: NearOne {
            value: v,
            excess: v - 1.0,
            terms: 0,
            tail_bound: 0.0,
        },
        method: PhiMethod::Quadrature { n },
    })
}

/// `||psi||_q - ||phi||_p`; nonnegative exactly when the exponent pair
/// `(q, p)` survives at this `eps`.
pub fn norm_margin(fam: &Homog2Family, p: NormExponent) -> Result<f64> {
    let psi = psi_norm_series(fam)?;
    let phi = phi_norm_series(fam, p)?;
    Ok(psi.excess - phi.norm.excess)
}

/// `log ||psi||_q - log ||phi||_p`, which has the sign of [`norm_margin`].
pub fn log_margin(fam: &Homog2Family, p: NormExponent) -> Result<f64> {
    let psi = psi_norm_series(fam)?;
    let phi = phi_norm_series(fam, p)?;
    Ok(psi.log() - phi.norm.log())
}

/// The predicted small-`eps` expansion coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expansion {
    /// `||psi||_q = 1 + psi_c2 eps^2 + psi_c4 eps^4 + O(eps^6)`.
    pub psi_c2: f64,
    pub psi_c4: f64,
    /// `||phi||_p = 1 + phi_c2 eps^2 + phi_c4 eps^4 + O(eps^6)`.
    pub phi_c2: f64,
    pub phi_c4: f64,
    /// `a = 1 + a_c2 eps^2 + a_c4 eps^4 + O(eps^6)`.
    pub a_c2: f64,
    pub a_c4: f64,
}

pub fn expansion(q_star: f64, p: f64) -> Expansion {
    Expansion {
        psi_c2: q_star - 1.0,
        psi_c4: (q_star - 1.0) * (3.0 * q_star - 8.0) / 4.0,
        phi_c2: q_star - 1.0,
        phi_c4: (p + 3.0 * q_star * q_star - 10.0 * q_star + 4.0) / 4.0,
        a_c2: q_star - 2.0,
        a_c4: 0.75 * (q_star - 2.0) * (q_star - 4.0),
    }
}

/// The `eps^4` comparison: `phi_c4 <= psi_c4`, equivalent to `p <= 4 - q*`.
pub fn eps4_criterion(q_star: f64, p: f64) -> bool {
    let e = expansion(q_star, p);
    e.phi_c4 <= e.psi_c4
}

/// Fits `g(eps) = c2 eps^2 + c4 eps^4 + c6 eps^6` through three points, which
/// is Richardson extrapolation of `g / eps^2` in `t = eps^2`. Returns
/// `(c2, c4)`.
pub fn fit_even_coefficients(eps: [f64; 3], values: [f64; 3]) -> Result<(f64, f64)> {
    let t: Vec<f64> = eps.iter().map(|e| e * e).collect();
    let g: Vec<f64> = values.iter().zip(&t).map(|(v, t)| v / t).collect();
    // Quadratic g(t) = c2 + c4 t + c6 t^2 in Newton form.
    let d01 = (g[1] - g[0]) / (t[1] - t[0]);
    let d12 = (g[2] - g[1]) / (t[2] - t[1]);
    let d012 = (d12 - d01) / (t[2] - t[0]);
    if !d012.is_finite() {
        return Err(Error::OutOfDomain("fit abscissae must be distinct"));
    }
    // g(t) = g0 + d01 (t - t0) + d012 (t - t0)(t - t1)
    let c2 = g[0] - d01 * t[0] + d012 * t[0] * t[1];
    let c4 = d01 - d012 * (t[0] + t[1]);
    Ok((c2, c4))
}

/// Fitted expansion coefficients of `||psi||_q` and `||phi||_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionFit {
    pub fitted: Expansion,
    pub predicted: Expansion,
}

impl ExpansionFit {
    /// Largest relative error over the four fitted coefficients (`a` is
    /// included as well).
    pub fn max_rel_error(&self) -> f64 {
        let f = &self.fitted;
        let p = &self.predicted;
        [
            (f.psi_c2, p.psi_c2),
            (f.psi_c4, p.psi_c4),
            (f.phi_c2, p.phi_c2),
            (f.phi_c4, p.phi_c4),
            (f.a_c2, p.a_c2),
            (f.a_c4, p.a_c4),
        ]
        .iter()
        .map(|(x, y)| {
            if *y == 0.0 {
                x.abs()
            } else {
                ((x - y) / y).abs()
            }
        })
        .fold(0.0, f64::max)
    }
}

/// Default abscissae for the expansion fit.
pub const FIT_EPS: [f64; 3] = [0.02, 0.01, 0.005];

pub fn fit_expansion(
    q_star: f64,
    p: f64,
    eps: [f64; 3],
    ctl: &SeriesControl,
) -> Result<ExpansionFit> {
    let mut psi = [0.0; 3];
    let mut phi = [0.0; 3];
    let mut a = [0.0; 3];
    for (i, &e) in eps.iter().enumerate() {
        let fam = Homog2Family::new(e, q_star, *ctl)?;
        psi[i] = psi_norm_series(&fam)?.excess;
        phi[i] = phi_norm_series(&fam, NormExponent::from_f64(p)?)?
            .norm
            .excess;
        a[i] = ab_series(&fam)?.a_excess;
    }
    let (psi_c2, psi_c4) = fit_even_coefficients(eps, psi)?;
    let (phi_c2, phi_c4) = fit_even_coefficients(eps, phi)?;
    let (a_c2, a_c4) = fit_even_coefficients(eps, a)?;
    Ok(ExpansionFit {
        fitted: Expansion {
            psi_c2,
            psi_c4,
            phi_c2,
            phi_c4,
            a_c2,
            a_c4,
        },
        predicted: expansion(q_star, p),
    })
}

/// Fourier structure of sampled `psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionStructure {
    /// `psi^(1,1)`.
    pub a: f64,
    /// `psi^(2,0) / eps`.
    pub b: f64,
    /// `|psi^(2,0) + psi^(0,2)|`.
    pub antisymmetry: f64,
    /// Coefficient mass of `P_+ psi` off `{(1,1), (2,0), (0,2)}`.
    pub off_support: f64,
    /// Largest coefficient off the line `alpha1 + alpha2 = 2`.
    pub homogeneity_defect: f64,
    /// Nyquist mass of the grid spectrum.
    pub aliasing: f64,
}

pub fn projection_structure(fam: &Homog2Family, n: usize) -> Result<ProjectionStructure> {
    let (_, psi) = build_family(fam, n)?;
    let spec = all_coefficients(&psi)?;
    let plus = spec.poly.riesz_project();
    let off_support = plus
        .terms()
        .filter(|(a, _)| !matches!(a.entries(), [1, 1] | [2, 0] | [0, 2]))
        .map(|(_, c)| c.norm())
        .sum();
    let c20 = spec.poly.coeff(&[2, 0]);
    let c02 = spec.poly.coeff(&[0, 2]);
    Ok(ProjectionStructure {
        a: spec.poly.coeff(&[1, 1]).re,
        b: c20.re / fam.eps,
        antisymmetry: (c20 + c02).norm(),
        off_support,
        homogeneity_defect: spec.poly.homogeneity_defect()?,
        aliasing: spec.discarded,
    })
}

/// `||psi||_q` by quadrature on an `n x n` grid.
pub fn psi_norm_quadrature(fam: &Homog2Family, n: usize) -> Result<f64> {
    let (_, psi) = build_family(fam, n)?;
    lp_norm(&psi, NormExponent::from_f64(fam.q())?)
}

/// One `eps` row of a threshold scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRow {
    pub eps: f64,
    /// Largest surviving point of the supplied `p` grid.
    pub grid_threshold: Option<f64>,
    /// Bisection refinement of the supremum of surviving `p >= 0`
    /// (the geometric mean counts as `p = 0`). `None` if even the geometric
    /// mean fails.
    pub threshold_p: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub psi_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdScan {
    pub q: f64,
    pub q_star: f64,
    pub rows: Vec<ThresholdRow>,
    /// Extrapolation of the thresholds to `eps = 0` in `eps^2`.
    pub extrapolated: Option<f64>,
    /// `4 - q*`.
    pub target: f64,
    pub resolution: f64,
}

/// Default bisection resolution in `p`.
pub const THRESHOLD_RESOLUTION: f64 = 1e-4;

/// Default `p` grid: `0.05, 0.10, ..., 4`.
pub fn default_p_grid() -> Vec<f64> {
    (1..=80).map(|i| i as f64 * 0.05).collect()
}

fn survives(fam: &Homog2Family, p: f64) -> Result<bool> {
    Ok(log_margin(fam, NormExponent::from_f64(p)?)? >= 0.0)
}

/// For each `eps`, the largest `p` with `||phi||_p <= ||psi||_q`, first on
/// `p_grid` and then refined by bisection to `resolution`; the thresholds are
/// extrapolated to `eps -> 0` through a polynomial in `eps^2` over the last
/// three rows.
///
/// `||phi||_p` increases with `p`, so the surviving set is an interval.
pub fn threshold_scan(
    q: f64,
    eps_list: &[f64],
    p_grid: &[f64],
    resolution: f64,
    ctl: &SeriesControl,
) -> Result<ThresholdScan> {
    if eps_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::OutOfDomain("eps list must be strictly decreasing"));
    }
    if p_grid.windows(2).any(|w| !(w[1] > w[0])) || p_grid.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::OutOfDomain("p grid must be positive and increasing"));
    }
    if !(resolution > 0.0) {
        return Err(Error::OutOfDomain("resolution must be positive"));
    }
    let q_star = conjugate(q)?;
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let fam = Homog2Family::new(eps, q_star, *ctl)?;
        let ab = ab_series(&fam)?;
        let psi = psi_norm_series(&fam)?;
        let mut lo_idx = None;
        for (i, &p) in p_grid.iter().enumerate() {
            if survives(&fam, p)? {
                lo_idx = Some(i);
            } else {
                break;
            }
        }
        let grid_threshold = lo_idx.map(|i| p_grid[i]);
        let gm_ok = log_margin(&fam, NormExponent::GeometricMean)? >= 0.0;
        let threshold_p = if !gm_ok && lo_idx.is_none() {
            None
        } else {
            let mut lo = grid_threshold.unwrap_or(0.0);
            match p_grid.get(lo_idx.map_or(0, |i| i + 1)) {
                None => Some(lo),
                Some(&hi) => {
                    let mut hi = hi;
                    while hi - lo > resolution {
                        let mid = 0.5 * (lo + hi);
                        if survives(&fam, mid)? {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    Some(0.5 * (lo + hi))
                }
            }
        };
        rows.push(ThresholdRow {
            eps,
            grid_threshold,
            threshold_p,
            a: ab.a,
            b: ab.b,
            psi_norm: psi.value,
        });
    }
    let extrapolated = extrapolate(&rows);
    Ok(ThresholdScan {
        q,
        q_star,
        rows,
        extrapolated,
        target: 4.0 - q_star,
        resolution,
    })
}

fn extrapolate(rows: &[ThresholdRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.threshold_p.map(|p| (r.eps * r.eps, p)))
        .collect();
    let tail = &pts[pts.len().saturating_sub(3)..];
    match tail {
        [] => None,
        [(_, p)] => Some(*p),
        [(t0, p0), (t1, p1)] => Some(p1 - t1 * (p1 - p0) / (t1 - t0)),
        _ => {
            // Lagrange interpolation evaluated at t = 0.
            let mut v = 0.0;
            for (i, &(ti, pi)) in tail.iter().enumerate() {
                let mut w = 1.0;
                for (j, &(tj, _)) in tail.iter().enumerate() {
                    if i != j {
                        w *= tj / (tj - ti);
                    }
                }
                v += w * pi;
            }
            Some(v)
        }
    }
}
