//! The `L^1` geometric-mean inequality `||P_+ psi||_0 <= ||psi||_1`, its
//! equality certificate, and the Hölder identity for `N_{q*}`.

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use super::factor::blaschke_inner_shifted;
use super::roots::polynomial_geometric_mean;
use crate::error::{Error, Result};
use crate::fourier::{all_coefficients, GridFunction};
use crate::norms::{conjugate, lp_norm, nonlinear_map, NormExponent};

/// Largest projected degree handed to the root finder.
const MAX_JENSEN_DEGREE: i64 = 256;

/// How the geometric mean of `P_+ psi` was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometricMeanMethod {
    /// Jensen's formula on the recovered polynomial of the given degree.
    Jensen { degree: i64 },
    /// Grid quadrature of `log |P_+ psi|`.
    Quadrature,
    /// `P_+ psi` vanishes identically.
    Vanishing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Check {
    /// `||P_+ psi||_0`.
    pub lhs: f64,
    /// `||psi||_1`.
    pub rhs: f64,
    /// `rhs - lhs`.
    pub gap: f64,
    pub method: GeometricMeanMethod,
    /// Coefficient mass on the Nyquist bin of the grid.
    pub aliasing: f64,
}

fn require_circle(g: &GridFunction) -> Result<()> {
    if g.dim() != 1 {
        return Err(Error::UnsupportedDimension {
            supported: 1,
            found: g.dim(),
        });
    }
    Ok(())
}

/// Compares `||P_+ psi||_0` with `||psi||_1` for sampled `psi`.
///
/// When the projected spectrum is effectively finite the geometric mean is
/// taken from the roots of the recovered polynomial, which is exact even when
/// zeros lie close to the circle; otherwise the projected samples are
/// integrated directly.
pub fn theorem_l1_check(psi: &GridFunction) -> Result<L1Check> {
    require_circle(psi)?;
    let rhs = lp_norm(psi, NormExponent::Finite(1.0))?;
    let spec = all_coefficients(psi)?;
    let plus = spec.poly.riesz_project();
    let peak = plus.terms().fold(0.0f64, |m, (_, c)| m.max(c.norm()));
    let finish = |lhs: f64, method| L1Check {
        lhs,
        rhs,
        gap: rhs - lhs,
        method,
        aliasing: spec.discarded,
    };
    if peak == 0.0 {
        return Ok(finish(0.0, GeometricMeanMethod::Vanishing));
    }
    let quarter = (psi.n_per_axis() / 4) as i64;
    let tail = plus
        .terms()
        .filter(|(a, _)| a.entries()[0] > quarter)
        .fold(0.0f64, |m, (_, c)| m.max(c.norm()));
    let trimmed = plus.pruned(1e-13 * peak);
    let degree = trimmed.degree_range(0).map_or(0, |(_, hi)| hi);
    if tail <= 1e-12 * peak && spec.discarded <= 1e-12 * peak && degree <= MAX_JENSEN_DEGREE {
        let lhs = polynomial_geometric_mean(&trimmed)?;
        return Ok(finish(lhs, GeometricMeanMethod::Jensen { degree }));
    }
    let projected = psi.riesz_project()?.grid;
    let lhs = lp_norm(&projected, NormExponent::GeometricMean)?;
    Ok(finish(lhs, GeometricMeanMethod::Quadrature))
}

/// Tolerance of the equality certificate.
pub const CERTIFICATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Certificate {
    pub holds: bool,
    /// `min Re(conj(I) psi)` over the grid.
    pub min_real: f64,
    /// `max |Im(conj(I) psi)|` over the grid.
    pub max_imag: f64,
}

/// Checks `conj(I) psi >= 0` on the grid for the Blaschke product `I` with the
/// given zeros.
pub fn l1_equality_certificate(
    psi: &GridFunction,
    inner_zeros: &[Complex64],
) -> Result<L1Certificate> {
    require_circle(psi)?;
    let inner = blaschke_inner_shifted(inner_zeros, psi.n_per_axis(), psi.shift())?;
    let product = inner.zip_with(psi, |i, p| i.conj() * p)?;
    let min_real = product
        .samples()
        .iter()
        .fold(f64::INFINITY, |m, z| m.min(z.re));
    let max_imag = product
        .samples()
        .iter()
        .fold(0.0f64, |m, z| m.max(z.im.abs()));
    Ok(L1Certificate {
        holds: min_real >= -CERTIFICATE_TOL && max_imag <= CERTIFICATE_TOL,
        min_real,
        max_imag,
    })
}

/// `| ||N_{q*} f||_q ||f||_{q*} - <f, N_{q*} f> |`, which vanishes for every
/// `f` because both terms equal `||f||_{q*}^{q*}`.
pub fn holderme_check(f: &GridFunction, q_star: f64) -> Result<f64> {
    if !(q_star >= 1.0 && q_star.is_finite()) {
        return Err(Error::InvalidExponent {
            value: q_star,
            reason: "q* must lie in [1, infinity)",
        });
    }
    let q = conjugate(q_star)?;
    let g = nonlinear_map(f, q_star);
    let lhs = lp_norm(&g, NormExponent::from_f64(q)?)? * lp_norm(f, NormExponent::Finite(q_star))?;
    let pairing = f.inner(&g)?;
    Ok((Complex64::new(lhs, 0.0) - pairing).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{sample, GridShift, TrigPoly};
    use crate::rpk::{poisson_kernel, rpk_extremal_function, KernelPoint};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn simplest_example() -> GridFunction {
        let p = TrigPoly::from_terms(
            1,
            [
                ([-1i64], c(1.0, 0.0)),
                ([1], c(2.0, 0.0)),
                ([3], c(1.0, 0.0)),
            ],
        )
        .unwrap();
        sample(&p, 256).unwrap()
    }

    #[test]
    fn equality_examples() {
        let r = theorem_l1_check(&simplest_example()).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-9);
        assert!((r.rhs - 2.0).abs() < 1e-9);
        assert!(r.gap.abs() < 1e-9);
        assert!(matches!(
            r.method,
            GeometricMeanMethod::Jensen { degree: 3 }
        ));

        let w = KernelPoint::real(0.5).unwrap();
        let r = theorem_l1_check(&poisson_kernel(&w, 512).unwrap()).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-9);
        assert!((r.rhs - 1.0).abs() < 1e-12);
        assert!(r.gap.abs() < 1e-9);
    }

    #[test]
    fn strict_example() {
        let p = TrigPoly::from_terms(1, [([0i64], c(1.0, 0.0)), ([-1], c(0.5, 0.0))]).unwrap();
        let r = theorem_l1_check(&sample(&p, 256).unwrap()).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14);
        assert!(r.gap > 1e-3);
    }

    #[test]
    fn certificates() {
        let zero = [c(0.0, 0.0)];
        assert!(
            l1_equality_certificate(&simplest_example(), &zero)
                .unwrap()
                .holds
        );
        let w = KernelPoint::real(0.5).unwrap();
        assert!(
            l1_equality_certificate(&poisson_kernel(&w, 256).unwrap(), &[])
                .unwrap()
                .holds
        );
        let p = TrigPoly::from_terms(1, [([0i64], c(1.0, 0.0)), ([-1], c(0.5, 0.0))]).unwrap();
        let cert = l1_equality_certificate(&sample(&p, 256).unwrap(), &[]).unwrap();
        assert!(!cert.holds);
        assert!(cert.max_imag > 0.1);
    }

    #[test]
    fn holder_identity() {
        let one = GridFunction::constant(1, 16, c(1.0, 0.0)).unwrap();
        assert!(holderme_check(&one, 3.0).unwrap() < 1e-15);
        let f = GridFunction::from_fn(1, 256, GridShift::Lattice, |t| {
            c(1.0, 0.0) + Complex64::from_polar(0.3, t[0])
        })
        .unwrap();
        assert!(holderme_check(&f, 4.0).unwrap() < 1e-12);
        let w = KernelPoint::real(0.5).unwrap();
        let f = rpk_extremal_function(&w, 4.0, 256).unwrap();
        assert!(holderme_check(&f, 4.0).unwrap() < 1e-10);
    }
}
