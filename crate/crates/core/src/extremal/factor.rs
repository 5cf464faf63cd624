//! Inner/outer factorization on the circle.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use super::roots::polynomial_roots;
use crate::error::{Error, Result};
use crate::fourier::{all_coefficients, sample_shifted, GridFunction, GridShift, TrigPoly};

fn require_circle(g: &GridFunction) -> Result<()> {
    if g.dim() != 1 {
        return Err(Error::UnsupportedDimension {
            supported: 1,
            found: g.dim(),
        });
    }
    Ok(())
}

/// Outer function with modulus `m` on the circle.
///
/// `log m` is completed to an analytic function (mean kept, positive
/// frequencies doubled, negative ones dropped) and exponentiated, so the
/// result satisfies `Phi(0) = exp(mean log m) > 0`.
pub fn outer_from_modulus(m: &GridFunction) -> Result<GridFunction> {
    require_circle(m)?;
    if m.samples().iter().any(|z| !(z.re > 0.0) || z.im != 0.0) {
        return Err(Error::NonPositiveModulus);
    }
    let log_m = m.map(|z| Complex64::new(z.re.ln(), 0.0));
    let spec = all_coefficients(&log_m)?;
    let mut completion = TrigPoly::zero(1)?;
    for (alpha, c) in spec.poly.terms() {
        let k = alpha.entries()[0];
        if k == 0 {
            completion.add_term(&[0], Complex64::new(c.re, 0.0))?;
        } else if k > 0 {
            completion.add_term(&[k], c * 2.0)?;
        }
    }
    let h = sample_shifted(&completion, m.n_per_axis(), m.shift())?;
    Ok(h.map(|z| z.exp()))
}

/// One Blaschke factor `(|a|/a)(a - z)/(1 - conj(a) z)`, or `z` for `a = 0`.
pub fn blaschke_factor(a: Complex64, z: Complex64) -> Complex64 {
    if a.norm() == 0.0 {
        return z;
    }
    let one = Complex64::new(1.0, 0.0);
    (a.norm() / a) * (a - z) / (one - a.conj() * z)
}

fn check_zeros(zeros: &[Complex64]) -> Result<()> {
    for a in zeros {
        if !(a.norm() < 1.0) {
            return Err(Error::OutsideDisc(a.norm()));
        }
    }
    Ok(())
}

/// Finite Blaschke product with the given zeros sampled on an `n`-point grid.
pub fn blaschke_inner(zeros: &[Complex64], n: usize) -> Result<GridFunction> {
    blaschke_inner_shifted(zeros, n, GridShift::Lattice)
}

pub fn blaschke_inner_shifted(
    zeros: &[Complex64],
    n: usize,
    shift: GridShift,
) -> Result<GridFunction> {
    check_zeros(zeros)?;
    GridFunction::from_fn(1, n, shift, |t| {
        let z = Complex64::new(t[0].cos(), t[0].sin());
        zeros.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| {
            acc * blaschke_factor(a, z)
        })
    })
}

/// `phi = c I Phi` with `I` a finite Blaschke product, `|c| = 1` and `Phi`
/// outer with `Phi(0) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub inner_zeros: Vec<Complex64>,
    pub unimodular_constant: Complex64,
    /// `|Phi|` on the grid.
    pub outer_modulus: GridFunction,
    /// `Phi` itself, a polynomial with no zeros in the open disc.
    pub outer_poly: TrigPoly,
}

impl Factorization {
    /// `c I` on the grid of the outer modulus.
    pub fn inner(&self) -> Result<GridFunction> {
        let b = blaschke_inner_shifted(
            &self.inner_zeros,
            self.outer_modulus.n_per_axis(),
            self.outer_modulus.shift(),
        )?;
        let c = self.unimodular_constant;
        Ok(b.map(|z| z * c))
    }

    /// `Phi` on the grid.
    pub fn outer(&self) -> Result<GridFunction> {
        sample_shifted(
            &self.outer_poly,
            self.outer_modulus.n_per_axis(),
            self.outer_modulus.shift(),
        )
    }

    /// `c I Phi` on the grid.
    pub fn reconstruct(&self) -> Result<GridFunction> {
        self.inner()?.zip_with(&self.outer()?, |a, b| a * b)
    }
}

/// Factorizes an analytic polynomial on the circle from its roots.
///
/// Each root `a` inside the disc is moved into the Blaschke product, using
/// `z - a = -(a/|a|) B_a(z) (1 - conj(a) z)`; the remaining polynomial is
/// outer. Roots on the circle stay in the outer factor.
pub fn factorize(phi: &TrigPoly, n: usize) -> Result<Factorization> {
    let Some((lowest, coeffs)) = phi.dense_1d()? else {
        return Err(Error::AllZero);
    };
    if lowest < 0 {
        return Err(Error::OutOfDomain("polynomial must be analytic"));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut inner_zeros: Vec<Complex64> = (0..lowest).map(|_| Complex64::new(0.0, 0.0)).collect();
    let mut scale = coeffs[coeffs.len() - 1];
    let mut outer = TrigPoly::constant(1, one)?;
    for r in polynomial_roots(&coeffs)? {
        let factor = if r.norm() < 1.0 {
            inner_zeros.push(r);
            scale *= -r / r.norm();
            [one, -r.conj()]
        } else {
            [-r, one]
        };
        outer = outer.mul(&TrigPoly::from_dense_1d(0, &factor))?;
    }
    let outer = outer.scale(scale);
    let at_zero = outer.coeff(&[0]);
    let unimodular_constant = at_zero / at_zero.norm();
    let outer_poly = outer.scale(unimodular_constant.conj());
    let outer_modulus =
        sample_shifted(&outer_poly, n, GridShift::Lattice)?.map(|z| Complex64::new(z.norm(), 0.0));
    Ok(Factorization {
        inner_zeros,
        unimodular_constant,
        outer_modulus,
        outer_poly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::coefficients;
    use crate::norms::{lp_norm, NormExponent};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_modulus() {
        let m = GridFunction::constant(1, 64, c(3.0, 0.0)).unwrap();
        let phi = outer_from_modulus(&m).unwrap();
        assert!(phi
            .samples()
            .iter()
            .all(|z| (z - c(3.0, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn recovers_two_plus_z_squared() {
        let m = GridFunction::from_fn(1, 256, GridShift::Lattice, |t| {
            c(
                (c(2.0, 0.0) + Complex64::from_polar(1.0, 2.0 * t[0])).norm(),
                0.0,
            )
        })
        .unwrap();
        let phi = outer_from_modulus(&m).unwrap();
        let spec = coefficients(&phi, 20).unwrap();
        let want = TrigPoly::from_dense_1d(0, &[c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(spec.poly.max_coeff_diff(&want).unwrap() < 1e-8);
    }

    #[test]
    fn rejects_nonpositive() {
        let mut s = alloc::vec![c(1.0, 0.0); 16];
        s[3] = c(0.0, 0.0);
        let m = GridFunction::new(1, 16, GridShift::Lattice, s).unwrap();
        assert_eq!(
            outer_from_modulus(&m).unwrap_err(),
            Error::NonPositiveModulus
        );
    }

    #[test]
    fn blaschke_basics() {
        let z = blaschke_inner(&[c(0.0, 0.0)], 32).unwrap();
        let id = GridFunction::from_fn(1, 32, GridShift::Lattice, |t| {
            Complex64::from_polar(1.0, t[0])
        })
        .unwrap();
        assert!(z.max_diff(&id).unwrap() < 1e-15);
        let one = blaschke_inner(&[], 32).unwrap();
        assert!(one.samples().iter().all(|v| *v == c(1.0, 0.0)));
        let b = blaschke_inner(&[c(0.0, 0.0), c(0.5, 0.0), c(0.0, -0.3)], 256).unwrap();
        assert!(b.samples().iter().all(|v| (v.norm() - 1.0).abs() < 1e-14));
        let p4 = lp_norm(&b.riesz_project().unwrap().grid, NormExponent::Finite(4.0)).unwrap();
        assert!((p4 - 1.0).abs() < 1e-10);
        assert!(blaschke_inner(&[c(1.0, 0.0)], 8).is_err());
    }

    #[test]
    fn factorization_round_trip() {
        // (z - 0.5)(z + 2i)(z - 0.2i) * 3
        let r = [c(0.5, 0.0), c(0.0, -2.0), c(0.0, 0.2)];
        let mut p = TrigPoly::constant(1, c(3.0, 0.0)).unwrap();
        for a in r {
            let f = TrigPoly::from_dense_1d(0, &[-a, c(1.0, 0.0)]);
            p = p.mul(&f).unwrap();
        }
        let fac = factorize(&p, 256).unwrap();
        assert_eq!(fac.inner_zeros.len(), 2);
        assert!((fac.unimodular_constant.norm() - 1.0).abs() < 1e-15);
        let back = fac.reconstruct().unwrap();
        let orig = sample_shifted(&p, 256, GridShift::Lattice).unwrap();
        assert!(back.max_diff(&orig).unwrap() < 1e-8);
        let outer = fac.outer().unwrap();
        // Phi(0) = geometric mean of |phi|, and Phi is the outer function of |phi|
        let gm = lp_norm(&fac.outer_modulus, NormExponent::GeometricMean).unwrap();
        assert!((outer.mean() - c(gm, 0.0)).norm() < 1e-10);
        let spectral = outer_from_modulus(&fac.outer_modulus).unwrap();
        assert!(spectral.max_diff(&outer).unwrap() < 1e-8);
    }
}
