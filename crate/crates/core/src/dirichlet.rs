//! Spherical Dirichlet kernels `D_{R,d} = sum_{|alpha| <= R} z^alpha` and the
//! growth of their `L^p` norms in `R`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fourier::{sample_shifted, GridShift, TrigPoly};
use crate::norms::{lp_norm, NormExponent};

/// Default cap on the number of lattice points.
pub const DEFAULT_LATTICE_CAP: usize = 1 << 21;

/// Oversampling factor for exponents other than even integers.
pub const OVERSAMPLING: usize = 4;

/// Largest radius accepted by the quadrature in dimension `d`, or `None`
/// above dimension 3.
pub fn max_quadrature_radius(d: usize) -> Option<f64> {
    match d {
        1 | 2 => Some(40.0),
        3 => Some(12.0),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletSpec {
    radius: f64,
    dim: usize,
}

impl DirichletSpec {
    pub fn new(radius: f64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::OutOfDomain("radius must be finite and nonnegative"));
        }
        Ok(Self { radius, dim })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `floor(R)`, the largest coordinate that occurs.
    pub fn reach(&self) -> i64 {
        self.radius.floor() as i64
    }
}

/// Calls `visit` for each lattice point of the closed ball, in lexicographic
/// order, stopping with an error once more than `cap` points are seen.
fn for_each_point<F: FnMut(&[i64])>(
    spec: &DirichletSpec,
    cap: usize,
    mut visit: F,
) -> Result<usize> {
    let r2 = spec.radius * spec.radius;
    let m = spec.reach();
    let d = spec.dim;
    let mut alpha = vec![-m; d];
    let mut count = 0usize;
    loop {
        let norm2: i64 = alpha.iter().map(|a| a * a).sum();
        if norm2 as f64 <= r2 {
            count += 1;
            if count > cap {
                return Err(Error::LatticeCap { cap });
            }
            visit(&alpha);
        }
        let mut ax = d;
        loop {
            if ax == 0 {
                return Ok(count);
            }
            ax -= 1;
            if alpha[ax] < m {
                alpha[ax] += 1;
                break;
            }
            alpha[ax] = -m;
        }
    }
}

/// Number of `alpha` in `Z^d` with `|alpha| <= R`.
pub fn lattice_count(spec: &DirichletSpec, cap: usize) -> Result<usize> {
    for_each_point(spec, cap, |_| {})
}

pub fn spherical_dirichlet(spec: &DirichletSpec, cap: usize) -> Result<TrigPoly> {
    let mut p = TrigPoly::zero(spec.dim)?;
    let one = Complex64::new(1.0, 0.0);
    let mut err = None;
    for_each_point(spec, cap, |a| {
        if let Err(e) = p.add_term(a, one) {
            err.get_or_insert(e);
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(p),
    }
}

fn needs_oversampling(p: NormExponent) -> bool {
    match p {
        NormExponent::Finite(p) => !(p % 2.0 == 0.0),
        NormExponent::GeometricMean => true,
        NormExponent::Infinity => false,
    }
}

/// Smallest admissible grid: `2 floor(R) + 2` per axis, times the
/// oversampling factor unless `p` is an even integer, rounded up to a power
/// of two.
pub fn required_grid(spec: &DirichletSpec, p: NormExponent) -> usize {
    let base = 2 * spec.reach() as usize + 2;
    let n = if needs_oversampling(p) {
        OVERSAMPLING * base
    } else {
        base
    };
    n.next_power_of_two()
}

/// `||D_{R,d}||_p` by midpoint quadrature; `p = infinity` is the lattice count.
pub fn dirichlet_norm(
    spec: &DirichletSpec,
    p: NormExponent,
    n_per_axis: Option<usize>,
    cap: usize,
) -> Result<f64> {
    let poly = spherical_dirichlet(spec, cap)?;
    if p == NormExponent::Infinity {
        return Ok(poly.len() as f64);
    }
    match max_quadrature_radius(spec.dim) {
        None => return Err(Error::OutOfDomain("quadrature supports d <= 3")),
        Some(r) if spec.radius > r => {
            return Err(Error::OutOfDomain(
                "radius above the quadrature cap (40 for d <= 2, 12 for d = 3)",
            ))
        }
        Some(_) => {}
    }
    let required = required_grid(spec, p);
    let n = n_per_axis.unwrap_or(required);
    if n < required {
        return Err(Error::GridTooSmall { n, required });
    }
    let grid = sample_shifted(&poly, n, GridShift::HalfCell)?;
    lp_norm(&grid, p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthPoint {
    pub radius: f64,
    pub norm: f64,
    pub lattice_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub dim: usize,
    pub p: f64,
    /// Least-squares slope of `log ||D_R||_p` against `log R`.
    pub exponent: f64,
    /// `c` with `||D_R||_p ~ c^(1/p) R^exponent` at the fitted intercept.
    pub c_hat: f64,
    /// `(d - 1)/2`.
    pub target: f64,
    /// All computed points, including the smallest radius left out of the fit.
    pub points: Vec<GrowthPoint>,
}

/// Evaluates the norm for every radius (by `norm_at`) and fits the growth
/// exponent, discarding the smallest radius.
pub fn growth_fit_with<F>(dim: usize, p: f64, radii: &[f64], mut norm_at: F) -> Result<GrowthFit>
where
    F: FnMut(&DirichletSpec) -> Result<(f64, usize)>,
{
    if radii.len() < 4 {
        return Err(Error::OutOfDomain("growth fit needs at least four radii"));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(Error::OutOfDomain("radii must be positive and increasing"));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidExponent {
            value: p,
            reason: "growth fit needs 0 < p < infinity",
        });
    }
    let mut points = Vec::with_capacity(radii.len());
    for &r in radii {
        let spec = DirichletSpec::new(r, dim)?;
        let (norm, lattice_count) = norm_at(&spec)?;
        points.push(GrowthPoint {
            radius: r,
            norm,
            lattice_count,
        });
    }
    let (exponent, intercept) =
        least_squares(points[1..].iter().map(|g| (g.radius.ln(), g.norm.ln())));
    Ok(GrowthFit {
        dim,
        p,
        exponent,
        c_hat: (intercept * p).exp(),
        target: (dim as f64 - 1.0) / 2.0,
        points,
    })
}

/// Sequential [`growth_fit_with`] using [`dirichlet_norm`].
pub fn growth_fit(
    dim: usize,
    p: f64,
    radii: &[f64],
    n_per_axis: Option<usize>,
) -> Result<GrowthFit> {
    growth_fit_with(dim, p, radii, |spec| {
        let norm = dirichlet_norm(
            spec,
            NormExponent::Finite(p),
            n_per_axis,
            DEFAULT_LATTICE_CAP,
        )?;
        Ok((norm, lattice_count(spec, DEFAULT_LATTICE_CAP)?))
    })
}

/// Slope and intercept of the least-squares line through `(x, y)`.
pub fn least_squares<I: Iterator<Item = (f64, f64)>>(pts: I) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = pts.collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_caps() {
        let one = NormExponent::Finite(1.0);
        let big = DirichletSpec::new(13.0, 3).unwrap();
        assert!(dirichlet_norm(&big, one, None, DEFAULT_LATTICE_CAP).is_err());
        let four = DirichletSpec::new(1.0, 4).unwrap();
        assert!(dirichlet_norm(&four, one, None, DEFAULT_LATTICE_CAP).is_err());
        assert!(dirichlet_norm(&four, NormExponent::Infinity, None, DEFAULT_LATTICE_CAP).is_ok());
    }

    #[test]
    fn small_kernels() {
        let s = DirichletSpec::new(0.0, 3).unwrap();
        let p = spherical_dirichlet(&s, DEFAULT_LATTICE_CAP).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&[0, 0, 0]), Complex64::new(1.0, 0.0));
        let s = DirichletSpec::new(1.0, 2).unwrap();
        let p = spherical_dirichlet(&s, DEFAULT_LATTICE_CAP).unwrap();
        assert_eq!(p.len(), 5);
        for a in [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]] {
            assert_eq!(p.coeff(&a), Complex64::new(1.0, 0.0));
        }
        let two = dirichlet_norm(&s, NormExponent::Finite(2.0), None, DEFAULT_LATTICE_CAP).unwrap();
        assert!((two - 5f64.sqrt()).abs() < 1e-13);
        let sup = dirichlet_norm(&s, NormExponent::Infinity, None, DEFAULT_LATTICE_CAP).unwrap();
        assert_eq!(sup, 5.0);
    }

    #[test]
    fn one_dimensional_parseval() {
        for r in [0.5, 3.0, 7.9] {
            let s = DirichletSpec::new(r, 1).unwrap();
            let v =
                dirichlet_norm(&s, NormExponent::Finite(2.0), None, DEFAULT_LATTICE_CAP).unwrap();
            assert!((v * v - (2.0 * r.floor() + 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn cap_and_grid_guards() {
        let s = DirichletSpec::new(10.0, 2).unwrap();
        assert_eq!(
            lattice_count(&s, 10).unwrap_err(),
            Error::LatticeCap { cap: 10 }
        );
        assert!(matches!(
            dirichlet_norm(&s, NormExponent::Finite(1.0), Some(32), DEFAULT_LATTICE_CAP),
            Err(Error::GridTooSmall { .. })
        ));
        assert_eq!(required_grid(&s, NormExponent::Finite(2.0)), 32);
        assert_eq!(required_grid(&s, NormExponent::Finite(1.0)), 128);
    }

    #[test]
    fn lattice_counts() {
        // Gauss circle values
        let count = |r: f64, d| {
            lattice_count(&DirichletSpec::new(r, d).unwrap(), DEFAULT_LATTICE_CAP).unwrap()
        };
        assert_eq!(count(5.0, 2), 81);
        assert_eq!(count(10.0, 2), 317);
        assert_eq!(count(2.0, 3), 33);
    }

    #[test]
    fn least_squares_line() {
        let (s, b) = least_squares([(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)].into_iter());
        assert!((s - 2.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
    }
}
