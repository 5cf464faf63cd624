//! The reproducing-kernel family `k_w(z) = 1/(1 - conj(w) z)` on the circle.
//!
//! Both `||k_w||_p^p` and the norm of the extremal kernel for `k_w` are power
//! series in `r = |w|^2` with generalized binomial coefficients, summed here
//! with explicit truncation control. Sampled versions are provided for
//! cross-checking against quadrature.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fourier::{GridFunction, GridShift, TrigPoly};
use crate::norms::ExponentPair;
use crate::series::{sum_series, SeriesControl, SeriesValue};

/// A point `w` of the open unit disc, with `r = |w|^2` cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    w: Complex64,
    r: f64,
}

impl KernelPoint {
    pub fn new(w: Complex64) -> Result<Self> {
        let r = w.norm_sqr();
        if !(r < 1.0) {
            return Err(Error::OutsideDisc(w.norm()));
        }
        Ok(Self { w, r })
    }

    pub fn real(w: f64) -> Result<Self> {
        Self::new(Complex64::new(w, 0.0))
    }

    /// The point on the positive axis with `|w|^2 = r`.
    pub fn from_r(r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::OutsideDisc(r.abs().sqrt()));
        }
        Ok(Self {
            w: Complex64::new(r.sqrt(), 0.0),
            r,
        })
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// `binom(x, j) = prod_{i=1..j} (x - i + 1)/i` for real `x`.
pub fn general_binomial(x: f64, j: u32) -> f64 {
    let mut b = 1.0;
    for i in 0..j {
        b *= (x - i as f64) / (i as f64 + 1.0);
    }
    b
}

/// Iterator-style generator of `binom(n - 1 + s, n)` for `n = 0, 1, ...`.
struct RisingBinomial {
    s: f64,
    n: usize,
    value: f64,
}

impl RisingBinomial {
    fn new(s: f64) -> Self {
        Self {
            s,
            n: 0,
            value: 1.0,
        }
    }

    /// Value at index `n`; must be called with `n = 0, 1, 2, ...` in order.
    fn at(&mut self, n: usize) -> f64 {
        while self.n < n {
            self.n += 1;
            self.value *= (self.n as f64 - 1.0 + self.s) / self.n as f64;
        }
        self.value
    }
}

/// `||k_w||_p = (sum_n binom(n - 1 + p/2, n)^2 r^n)^(1/p)`.
///
/// `value` is the norm; `tail_bound` refers to the underlying sum.
pub fn kw_norm(w: &KernelPoint, p: f64, ctl: &SeriesControl) -> Result<SeriesValue> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidExponent {
            value: p,
            reason: "kernel norm needs 0 < p < infinity",
        });
    }
    let r = w.r();
    let mut b = RisingBinomial::new(p / 2.0);
    let mut rn = 1.0;
    let s = sum_series(ctl, r, |n| {
        if n > 0 {
            rn *= r;
        }
        let c = b.at(n);
        c * c * rn
    });
    Ok(s.map(|v| v.powf(1.0 / p)))
}

/// `||k_w||_p^p` for exponents written as a power of two.
fn power_series_closed(r: f64, s: f64) -> f64 {
    (1.0 - r).powf(-s)
}

/// Norm of the extremal kernel for `k_w` in `L^q`, raised to `p_power`, in
/// closed form `(1 - r)^(-p_power/q*)` and as the series
/// `sum_n binom(n - 1 + p_power/q*, n) r^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalKernelNorm {
    pub closed_form: f64,
    pub series: SeriesValue,
    /// `|series - closed| / closed`.
    pub rel_gap: f64,
}

pub fn extremal_kernel_norm(
    w: &KernelPoint,
    q: f64,
    p_power: f64,
    ctl: &SeriesControl,
) -> Result<ExtremalKernelNorm> {
    let pair = ExponentPair::new(q)?;
    if !(p_power > 0.0 && p_power.is_finite()) {
        return Err(Error::InvalidExponent {
            value: p_power,
            reason: "power must be positive and finite",
        });
    }
    let s = p_power / pair.q_star();
    let r = w.r();
    let closed_form = power_series_closed(r, s);
    let mut b = RisingBinomial::new(s);
    let mut rn = 1.0;
    let series = sum_series(ctl, r, |n| {
        if n > 0 {
            rn *= r;
        }
        b.at(n) * rn
    });
    if !series.converged {
        return Err(Error::SeriesNonConvergence {
            terms: series.terms,
            last_term: series.tail_bound,
        });
    }
    let rel_gap = (series.value - closed_form).abs() / closed_form;
    let allowed = 10.0 * ctl.rel_tol.max(f64::EPSILON) + series.tail_bound / closed_form;
    if rel_gap > allowed {
        return Err(Error::SeriesMismatch { gap: rel_gap });
    }
    Ok(ExtremalKernelNorm {
        closed_form,
        series,
        rel_gap,
    })
}

/// Coefficientwise comparison behind the sharp exponent `p = 4/q*` for `k_w`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientReport {
    pub q: f64,
    pub p: f64,
    pub n_max: u32,
    /// First `n` with `binom(n-1+p/q*, n) < binom(n-1+p/2, n)^2`.
    pub first_violation: Option<u32>,
    /// `binom(n-1+p/q*, n) - binom(n-1+p/2, n)^2` for `n = 1..=n_max`.
    pub margins: Vec<f64>,
    /// `binom(n-1+(p/2)^2, n) - binom(n-1+p/2, n)^2` for `n = 1..=n_max`.
    pub dominance_margins: Vec<f64>,
    /// `(j-1+(p/2)^2)/j - ((j-1+p/2)/j)^2` for `j = 1..=n_max`.
    pub factor_margins: Vec<f64>,
}

impl CoefficientReport {
    /// True when no coefficient is violated and every factor estimate holds.
    pub fn holds(&self) -> bool {
        self.first_violation.is_none() && self.factor_margins.iter().all(|&m| m >= -COEFF_TOL)
    }
}

/// Relative slack for coefficient comparisons that are exact equalities at
/// the critical exponent.
const COEFF_TOL: f64 = 1e-12;

pub fn rpk_coefficient_check(q: f64, p: f64, n_max: u32) -> Result<CoefficientReport> {
    let pair = ExponentPair::new(q)?;
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidExponent {
            value: p,
            reason: "p must be positive and finite",
        });
    }
    let half = p / 2.0;
    let mut lhs = RisingBinomial::new(p / pair.q_star());
    let mut dom = RisingBinomial::new(half * half);
    let mut rhs = RisingBinomial::new(half);
    let mut margins = Vec::with_capacity(n_max as usize);
    let mut dominance_margins = Vec::with_capacity(n_max as usize);
    let mut factor_margins = Vec::with_capacity(n_max as usize);
    let mut first_violation = None;
    for n in 1..=n_max {
        let a = lhs.at(n as usize);
        let d = dom.at(n as usize);
        let b = rhs.at(n as usize);
        let b2 = b * b;
        let m = a - b2;
        if first_violation.is_none() && m < -COEFF_TOL * a.abs().max(b2) {
            first_violation = Some(n);
        }
        margins.push(m);
        dominance_margins.push(d - b2);
        let j = n as f64;
        let f = (j - 1.0 + half * half) / j - ((j - 1.0 + half) / j).powi(2);
        factor_margins.push(f);
    }
    Ok(CoefficientReport {
        q,
        p,
        n_max,
        first_violation,
        margins,
        dominance_margins,
        factor_margins,
    })
}

/// `k_w` sampled on `n` points.
pub fn kernel_samples(w: &KernelPoint, n: usize) -> Result<GridFunction> {
    let wc = w.w().conj();
    GridFunction::from_fn(1, n, GridShift::Lattice, |t| {
        let z = Complex64::new(t[0].cos(), t[0].sin());
        (Complex64::new(1.0, 0.0) - wc * z).inv()
    })
}

/// `k_w` truncated to degree `degree`: `sum_{n <= degree} conj(w)^n z^n`.
pub fn kernel_poly(w: &KernelPoint, degree: u32) -> TrigPoly {
    let wc = w.w().conj();
    let coeffs: Vec<Complex64> = (0..=degree).map(|n| wc.powu(n)).collect();
    TrigPoly::from_dense_1d(0, &coeffs)
}

/// Extremal function `(1 - conj(w) z)^(-2/q*)` for `k_w` (principal branch;
/// `Re(1 - conj(w) z) > 0` on the closed disc).
pub fn rpk_extremal_function(w: &KernelPoint, q_star: f64, n: usize) -> Result<GridFunction> {
    if !(q_star >= 1.0 && q_star.is_finite()) {
        return Err(Error::InvalidExponent {
            value: q_star,
            reason: "q* must lie in [1, infinity)",
        });
    }
    let wc = w.w().conj();
    let e = -2.0 / q_star;
    GridFunction::from_fn(1, n, GridShift::Lattice, |t| {
        let z = Complex64::new(t[0].cos(), t[0].sin());
        ((Complex64::new(1.0, 0.0) - wc * z).ln() * e).exp()
    })
}

/// Poisson kernel `(1 - |w|^2)/|1 - conj(w) z|^2` sampled on `n` points.
pub fn poisson_kernel(w: &KernelPoint, n: usize) -> Result<GridFunction> {
    let wc = w.w().conj();
    let num = 1.0 - w.r();
    GridFunction::from_fn(1, n, GridShift::Lattice, |t| {
        let z = Complex64::new(t[0].cos(), t[0].sin());
        Complex64::new(num / (Complex64::new(1.0, 0.0) - wc * z).norm_sqr(), 0.0)
    })
}

/// `|f(w)| / ((1 - |w|^2)^(-1/q*) ||f||_{q*})` for the extremal function,
/// which equals 1 when the pointwise estimate is saturated. `f(w)` is
/// evaluated in closed form, `||f||_{q*}` by quadrature on `n` points.
pub fn pointwise_saturation(w: &KernelPoint, q_star: f64, n: usize) -> Result<f64> {
    let f = rpk_extremal_function(w, q_star, n)?;
    let norm = crate::norms::lp_norm(&f, crate::norms::NormExponent::Finite(q_star))?;
    let at_w = (1.0 - w.r()).powf(-2.0 / q_star);
    Ok(at_w / ((1.0 - w.r()).powf(-1.0 / q_star) * norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(general_binomial(5.0, 2), 10.0);
        assert_eq!(general_binomial(-0.5, 1), -0.5);
        assert_eq!(general_binomial(3.0, 5), 0.0);
        assert_eq!(general_binomial(2.5, 0), 1.0);
        // sign alternation for (q*/2 - 1) with q* = 1
        for j in 0..10 {
            let b = general_binomial(-0.5, j);
            assert_eq!(b.signum(), if j % 2 == 0 { 1.0 } else { -1.0 });
        }
    }

    #[test]
    fn kw_norm_at_origin_is_one() {
        let ctl = SeriesControl::default();
        let w = KernelPoint::real(0.0).unwrap();
        for p in [0.5, 1.0, 2.0, 4.0] {
            assert_eq!(kw_norm(&w, p, &ctl).unwrap().value, 1.0);
        }
    }

    #[test]
    fn kw_two_norm_is_geometric() {
        let ctl = SeriesControl::default();
        let w = KernelPoint::real(0.5).unwrap();
        let v = kw_norm(&w, 2.0, &ctl).unwrap();
        assert!(v.converged);
        assert!((v.value - (4.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((v.value - 1.154701).abs() < 1e-6);
    }

    #[test]
    fn extremal_norm_values() {
        let ctl = SeriesControl::default();
        let w = KernelPoint::real(0.0).unwrap();
        assert_eq!(
            extremal_kernel_norm(&w, 3.0, 1.0, &ctl)
                .unwrap()
                .closed_form,
            1.0
        );
        let w = KernelPoint::real(0.5).unwrap();
        let e = extremal_kernel_norm(&w, 4.0 / 3.0, 1.0, &ctl).unwrap();
        assert!((e.closed_form - 0.75f64.powf(-0.25)).abs() < 1e-15);
        assert!((e.closed_form - 1.074570).abs() < 1e-6);
        assert!(e.rel_gap < 1e-15);
    }

    #[test]
    fn extremal_norm_near_boundary() {
        let ctl = SeriesControl::new(2000, 1e-16).unwrap();
        let w = KernelPoint::real(0.9).unwrap();
        let e = extremal_kernel_norm(&w, 3.0, 1.0, &ctl).unwrap();
        assert!(e.rel_gap <= 1e-12);
        let short = SeriesControl::new(20, 1e-16).unwrap();
        assert!(extremal_kernel_norm(&w, 3.0, 1.0, &short)
            .unwrap_err()
            .is_nonconvergence());
    }

    #[test]
    fn coefficient_check_cases() {
        let rep = rpk_coefficient_check(f64::INFINITY, 4.0, 10).unwrap();
        assert!(rep.margins[0].abs() < 1e-14);
        assert!(rep.holds());

        let rep = rpk_coefficient_check(4.0 / 3.0, 1.2, 50).unwrap();
        assert_eq!(rep.first_violation, Some(1));
        assert!((rep.margins[0] - (0.3 - 0.36)).abs() < 1e-14);

        for q in [2.0, 3.0, 8.0] {
            let rep = rpk_coefficient_check(q, 2.0, 30).unwrap();
            assert!(rep.factor_margins.iter().all(|m| m.abs() < 1e-15));
            assert!(rep.holds());
        }
        assert!(rpk_coefficient_check(1.0, 1.0, 3).is_err());
    }

    #[test]
    fn kernel_point_domain() {
        assert!(KernelPoint::real(1.0).is_err());
        assert!(KernelPoint::new(Complex64::new(0.8, 0.7)).is_err());
        assert!(KernelPoint::from_r(0.81).is_ok());
        assert!(KernelPoint::from_r(-0.1).is_err());
    }

    #[test]
    fn extremal_function_with_q_star_two_is_kernel() {
        let w = KernelPoint::new(Complex64::new(0.3, -0.4)).unwrap();
        let f = rpk_extremal_function(&w, 2.0, 64).unwrap();
        let k = kernel_samples(&w, 64).unwrap();
        assert!(f.max_diff(&k).unwrap() < 1e-14);
    }

    #[test]
    fn poisson_at_origin_is_one() {
        let w = KernelPoint::real(0.0).unwrap();
        let p = poisson_kernel(&w, 16).unwrap();
        assert!(p.samples().iter().all(|z| *z == Complex64::new(1.0, 0.0)));
    }
}
