//! Trigonometric polynomials and sampled functions on the torus `T^d`, with
//! the conversions between them and the Riesz projections.
//!
//! A [`TrigPoly`] is a sparse coefficient table `alpha -> c_alpha` standing for
//! `sum_alpha c_alpha z^alpha` with `z_j = exp(i theta_j)`. A [`GridFunction`]
//! holds samples on the uniform grid `theta_k = 2 pi (k + s) / N` per axis,
//! where the shift `s` is `0` ([`GridShift::Lattice`]) or `1/2`
//! ([`GridShift::HalfCell`], the midpoint rule).
//!
//! Grid inner products and norms are means over the grid, which matches the
//! normalized measure `d theta / 2 pi` on each circle.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fft::transform_nd;
use crate::numeric::{pairwise_map_sum, pairwise_map_sum_c};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A frequency `alpha` in `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Self(entries))
    }

    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Squared Euclidean norm. Exact for entries up to `2^20` in any practical
    /// dimension (the sum is formed in 128-bit arithmetic).
    pub fn norm_sq(&self) -> u128 {
        self.0
            .iter()
            .map(|&a| (a as i128 * a as i128) as u128)
            .sum()
    }

    /// True when every entry is nonnegative, i.e. `alpha` lies in `N_0^d`.
    pub fn is_analytic(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn max_abs(&self) -> u64 {
        self.0.iter().map(|a| a.unsigned_abs()).max().unwrap_or(0)
    }
}

impl From<&[i64]> for MultiIndex {
    fn from(s: &[i64]) -> Self {
        Self(s.to_vec())
    }
}

/// Sparse trigonometric polynomial on `T^d`.
///
/// Stored coefficients are never exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            dim,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn constant(dim: usize, c: Complex64) -> Result<Self> {
        let mut p = Self::zero(dim)?;
        p.add_term(&vec![0; dim], c)?;
        Ok(p)
    }

    pub fn monomial(alpha: &[i64], c: Complex64) -> Result<Self> {
        let mut p = Self::zero(alpha.len())?;
        p.add_term(alpha, c)?;
        Ok(p)
    }

    /// Builds a polynomial from `(alpha, c)` pairs; repeated indices add up.
    pub fn from_terms<I, A>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, Complex64)>,
        A: AsRef<[i64]>,
    {
        let mut p = Self::zero(dim)?;
        for (alpha, c) in terms {
            p.add_term(alpha.as_ref(), c)?;
        }
        Ok(p)
    }

    /// One-variable polynomial `sum_k coeffs[k] z^(lowest + k)`.
    pub fn from_dense_1d(lowest: i64, coeffs: &[Complex64]) -> Self {
        let mut p = Self {
            dim: 1,
            coeffs: BTreeMap::new(),
        };
        for (k, c) in coeffs.iter().enumerate() {
            p.accumulate(MultiIndex(vec![lowest + k as i64]), *c);
        }
        p
    }

    pub fn add_term(&mut self, alpha: &[i64], c: Complex64) -> Result<()> {
        if alpha.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: alpha.len(),
            });
        }
        self.accumulate(MultiIndex(alpha.to_vec()), c);
        Ok(())
    }

    fn accumulate(&mut self, alpha: MultiIndex, c: Complex64) {
        match self.coeffs.entry(alpha) {
            Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v == ZERO {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            Entry::Vacant(e) => {
                if c != ZERO {
                    e.insert(c);
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, alpha: &[i64]) -> Complex64 {
        self.coeffs
            .get(&MultiIndex(alpha.to_vec()))
            .copied()
            .unwrap_or(ZERO)
    }

    /// Terms in lexicographic index order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    /// Largest `|alpha_j|` over stored terms.
    pub fn bandwidth(&self) -> u64 {
        self.coeffs.keys().map(|a| a.max_abs()).max().unwrap_or(0)
    }

    /// Per-axis `(min, max)` frequency over stored terms.
    pub fn degree_range(&self, axis: usize) -> Option<(i64, i64)> {
        let mut it = self.coeffs.keys().map(|a| a.0[axis]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    /// Dense coefficients `(lowest, [c_lowest, ..., c_highest])` of a
    /// one-variable polynomial; `None` for the zero polynomial.
    pub fn dense_1d(&self) -> Result<Option<(i64, Vec<Complex64>)>> {
        if self.dim != 1 {
            return Err(Error::UnsupportedDimension {
                supported: 1,
                found: self.dim,
            });
        }
        let Some((lo, hi)) = self.degree_range(0) else {
            return Ok(None);
        };
        let mut out = vec![Complex64::new(0.0, 0.0); (hi - lo) as usize + 1];
        for (a, c) in &self.coeffs {
            out[(a.0[0] - lo) as usize] = *c;
        }
        Ok(Some((lo, out)))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.accumulate(a.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self {
            dim: self.dim,
            coeffs: BTreeMap::new(),
        };
        for (a, c) in &self.coeffs {
            out.accumulate(a.clone(), c * s);
        }
        out
    }

    /// Pointwise product (coefficient convolution).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim)?;
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let sum: Vec<i64> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                out.accumulate(MultiIndex(sum), ca * cb);
            }
        }
        Ok(out)
    }

    /// The function `conj(p)`, whose coefficients are `conj(c_{-alpha})`.
    pub fn conj(&self) -> Self {
        let mut out = Self {
            dim: self.dim,
            coeffs: BTreeMap::new(),
        };
        for (a, c) in &self.coeffs {
            let neg: Vec<i64> = a.0.iter().map(|x| -x).collect();
            out.accumulate(MultiIndex(neg), c.conj());
        }
        out
    }

    /// `<self, other> = sum_alpha c_alpha conj(d_alpha)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_dim(other)?;
        let mut acc = ZERO;
        for (a, c) in &self.coeffs {
            if let Some(d) = other.coeffs.get(a) {
                acc += c * d.conj();
            }
        }
        Ok(acc)
    }

    /// Squared `L^2` norm by Parseval.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Sum of coefficient moduli (an upper bound for the sup norm).
    pub fn l1_coeff_mass(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// Evaluates at the torus point with angles `theta`.
    pub fn eval(&self, theta: &[f64]) -> Result<Complex64> {
        if theta.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: theta.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(a, c)| {
                let phase: f64 = a.0.iter().zip(theta).map(|(k, t)| *k as f64 * t).sum();
                c * Complex64::new(phase.cos(), phase.sin())
            })
            .sum())
    }

    /// Evaluates a one-variable polynomial at an arbitrary nonzero `z`
    /// (or at `z = 0` when every frequency is nonnegative).
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        if self.dim != 1 {
            return Err(Error::UnsupportedDimension {
                supported: 1,
                found: self.dim,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(a, c)| c * z.powi(a.0[0] as i32))
            .sum())
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    /// Largest coefficientwise difference `max_alpha |c_alpha - d_alpha|`.
    pub fn max_coeff_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .sub(other)?
            .coeffs
            .values()
            .fold(0.0, |m, c| m.max(c.norm())))
    }

    /// `P_+`: keeps the terms with `alpha` in `N_0^d`.
    pub fn riesz_project(&self) -> Self {
        self.filtered(|a| a.is_analytic())
    }

    /// `P_-` on the circle: keeps strictly negative frequencies.
    pub fn riesz_project_minus(&self) -> Result<Self> {
        if self.dim != 1 {
            return Err(Error::UnsupportedDimension {
                supported: 1,
                found: self.dim,
            });
        }
        Ok(self.filtered(|a| a.0[0] < 0))
    }

    /// Riesz projection in the selected variables only (0-based axes).
    pub fn partial_project(&self, axes: &[usize]) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::EmptyAxes);
        }
        if let Some(&axis) = axes.iter().find(|&&ax| ax >= self.dim) {
            return Err(Error::InvalidAxis {
                axis,
                dim: self.dim,
            });
        }
        Ok(self.filtered(|a| axes.iter().all(|&ax| a.0[ax] >= 0)))
    }

    fn filtered<F: Fn(&MultiIndex) -> bool>(&self, keep: F) -> Self {
        Self {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    /// Total coefficient modulus off the line `alpha_1 + alpha_2 = 2`.
    pub fn homogeneity_defect(&self) -> Result<f64> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension {
                supported: 2,
                found: self.dim,
            });
        }
        Ok(self
            .coeffs
            .iter()
            .filter(|(a, _)| a.total_degree() != 2)
            .map(|(_, c)| c.norm())
            .sum())
    }

    /// Exact 2-homogeneity: every stored term has `alpha_1 + alpha_2 = 2`.
    pub fn is_homogeneous2(&self) -> Result<bool> {
        Ok(self.homogeneity_defect()? == 0.0)
    }

    /// 2-homogeneity up to `tol` of off-line coefficient mass.
    pub fn is_homogeneous2_within(&self, tol: f64) -> Result<bool> {
        Ok(self.homogeneity_defect()? <= tol)
    }
}

/// Placement of the sampling grid within each cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridShift {
    /// `theta_k = 2 pi k / N`.
    #[default]
    Lattice,
    /// `theta_k = 2 pi (k + 1/2) / N`.
    HalfCell,
}

impl GridShift {
    fn offset(self) -> f64 {
        match self {
            GridShift::Lattice => 0.0,
            GridShift::HalfCell => 0.5,
        }
    }
}

/// Complex samples on a uniform `N^d` grid, stored row-major (axis 0 slowest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    dim: usize,
    n: usize,
    shift: GridShift,
    samples: Vec<Complex64>,
}

fn check_grid_size(n: usize) -> Result<()> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::GridNotPowerOfTwo(n));
    }
    Ok(())
}

fn grid_len(dim: usize, n: usize) -> Result<usize> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    n.checked_pow(dim as u32)
        .ok_or(Error::GridTooSmall { n, required: 0 })
}

impl GridFunction {
    pub fn new(dim: usize, n: usize, shift: GridShift, samples: Vec<Complex64>) -> Result<Self> {
        check_grid_size(n)?;
        let len = grid_len(dim, n)?;
        if samples.len() != len {
            return Err(Error::ShapeMismatch {
                expected: len,
                found: samples.len(),
            });
        }
        Ok(Self {
            dim,
            n,
            shift,
            samples,
        })
    }

    /// Samples `f(theta)` at every grid point.
    pub fn from_fn<F: FnMut(&[f64]) -> Complex64>(
        dim: usize,
        n: usize,
        shift: GridShift,
        mut f: F,
    ) -> Result<Self> {
        check_grid_size(n)?;
        let len = grid_len(dim, n)?;
        let step = 2.0 * PI / n as f64;
        let off = shift.offset();
        let mut idx = vec![0usize; dim];
        let mut theta = vec![0.0; dim];
        let mut samples = Vec::with_capacity(len);
        for _ in 0..len {
            for (t, &k) in theta.iter_mut().zip(&idx) {
                *t = step * (k as f64 + off);
            }
            samples.push(f(&theta));
            for ax in (0..dim).rev() {
                idx[ax] += 1;
                if idx[ax] < n {
                    break;
                }
                idx[ax] = 0;
            }
        }
        Ok(Self {
            dim,
            n,
            shift,
            samples,
        })
    }

    pub fn constant(dim: usize, n: usize, c: Complex64) -> Result<Self> {
        check_grid_size(n)?;
        let len = grid_len(dim, n)?;
        Ok(Self {
            dim,
            n,
            shift: GridShift::Lattice,
            samples: vec![c; len],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_per_axis(&self) -> usize {
        self.n
    }

    pub fn shift(&self) -> GridShift {
        self.shift
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Angles of the sample with flat index `k`.
    pub fn theta(&self, k: usize) -> Vec<f64> {
        let step = 2.0 * PI / self.n as f64;
        let off = self.shift.offset();
        let mut out = vec![0.0; self.dim];
        let mut rest = k;
        for ax in (0..self.dim).rev() {
            out[ax] = step * ((rest % self.n) as f64 + off);
            rest /= self.n;
        }
        out
    }

    /// Pointwise map keeping the grid.
    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            samples: self.samples.iter().map(|&z| f(z)).collect(),
            ..self.clone()
        }
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.n != other.n || self.shift != other.shift {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(
        &self,
        other: &Self,
        f: F,
    ) -> Result<Self> {
        self.check_same_grid(other)?;
        Ok(Self {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            ..self.clone()
        })
    }

    /// Normalized inner product `mean(f conj(g))`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let pairs: Vec<(Complex64, Complex64)> = self
            .samples
            .iter()
            .copied()
            .zip(other.samples.iter().copied())
            .collect();
        Ok(pairwise_map_sum_c(&pairs, |(a, b)| a * b.conj()) / self.len() as f64)
    }

    /// Mean of the samples (the zeroth Fourier coefficient).
    pub fn mean(&self) -> Complex64 {
        pairwise_map_sum_c(&self.samples, |z| *z) / self.len() as f64
    }

    /// `max |f|` over the grid.
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Root-mean-square of `f - g`.
    pub fn rms_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        let pairs: Vec<(Complex64, Complex64)> = self
            .samples
            .iter()
            .copied()
            .zip(other.samples.iter().copied())
            .collect();
        Ok((pairwise_map_sum(&pairs, |(a, b)| (a - b).norm_sqr()) / self.len() as f64).sqrt())
    }

    /// Largest pointwise `|f - g|`.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// Projection `P_+` computed spectrally with the maximal admissible cutoff.
    pub fn riesz_project(&self) -> Result<Projected> {
        self.spectral_filter(|freq| freq.iter().all(|&k| k >= 0))
    }

    /// `P_-` on the circle.
    pub fn riesz_project_minus(&self) -> Result<Projected> {
        if self.dim != 1 {
            return Err(Error::UnsupportedDimension {
                supported: 1,
                found: self.dim,
            });
        }
        self.spectral_filter(|freq| freq[0] < 0)
    }

    /// Keeps the Fourier bins whose signed frequency satisfies `keep`.
    /// Nyquist bins are always dropped and their mass reported.
    pub fn spectral_filter<F: Fn(&[i64]) -> bool>(&self, keep: F) -> Result<Projected> {
        let mut spec = self.samples.clone();
        transform_nd(&mut spec, self.dim, self.n, false)?;
        let scale = 1.0 / self.len() as f64;
        let mut nyquist_mass = 0.0;
        let mut freq = vec![0i64; self.dim];
        for (k, c) in spec.iter_mut().enumerate() {
            let nyquist = signed_frequency(k, self.dim, self.n, &mut freq);
            if nyquist {
                nyquist_mass += c.norm() * scale;
                *c = ZERO;
            } else if !keep(&freq) {
                *c = ZERO;
            }
        }
        transform_nd(&mut spec, self.dim, self.n, true)?;
        for c in spec.iter_mut() {
            *c *= scale;
        }
        Ok(Projected {
            grid: Self {
                samples: spec,
                ..self.clone()
            },
            aliasing: nyquist_mass,
        })
    }
}

/// Output of a spectral operation on sampled data.
#[derive(Debug, Clone, PartialEq)]
pub struct Projected {
    pub grid: GridFunction,
    /// Coefficient mass that was discarded as ambiguous (Nyquist bins).
    pub aliasing: f64,
}

/// Coefficients recovered from samples, with the mass left outside the cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub poly: TrigPoly,
    /// Sum of `|c|` over all discrete bins not returned in `poly`.
    pub discarded: f64,
}

/// Writes the signed frequencies of flat bin `k` into `freq`; returns true if
/// any axis sits on the Nyquist bin `N/2`.
fn signed_frequency(k: usize, dim: usize, n: usize, freq: &mut [i64]) -> bool {
    let mut rest = k;
    let mut nyquist = false;
    for ax in (0..dim).rev() {
        let b = rest % n;
        rest /= n;
        if b == n / 2 {
            nyquist = true;
        }
        freq[ax] = if b <= n / 2 {
            b as i64
        } else {
            b as i64 - n as i64
        };
    }
    nyquist
}

fn shift_phase(shift: GridShift, n: usize, alpha: &[i64]) -> Complex64 {
    match shift {
        GridShift::Lattice => Complex64::new(1.0, 0.0),
        GridShift::HalfCell => {
            let a = PI * alpha.iter().sum::<i64>() as f64 / n as f64;
            Complex64::new(a.cos(), a.sin())
        }
    }
}

/// Samples `poly` on the lattice grid with `n` points per axis.
pub fn sample(poly: &TrigPoly, n: usize) -> Result<GridFunction> {
    sample_shifted(poly, n, GridShift::Lattice)
}

/// Samples `poly` on a grid with the given shift.
///
/// Refuses grids whose frequency window `[-N/2+1, N/2-1]` does not contain the
/// polynomial, rather than aliasing silently.
pub fn sample_shifted(poly: &TrigPoly, n: usize, shift: GridShift) -> Result<GridFunction> {
    check_grid_size(n)?;
    let required = 2 * (poly.bandwidth() as usize + 1);
    if n < required {
        return Err(Error::GridTooSmall { n, required });
    }
    let len = grid_len(poly.dim(), n)?;
    let mut data = vec![ZERO; len];
    for (alpha, c) in poly.terms() {
        let mut flat = 0usize;
        for &a in alpha.entries() {
            flat = flat * n + a.rem_euclid(n as i64) as usize;
        }
        data[flat] += c * shift_phase(shift, n, alpha.entries());
    }
    transform_nd(&mut data, poly.dim(), n, true)?;
    GridFunction::new(poly.dim(), n, shift, data)
}

/// Discrete Fourier coefficients for all `|alpha_j| <= cutoff`.
///
/// Exact (to rounding) for band-limited input; for smooth input the aliasing
/// error is bounded by the reported `discarded` mass, which decays with `N`.
pub fn coefficients(grid: &GridFunction, cutoff: usize) -> Result<Spectrum> {
    let n = grid.n;
    if cutoff >= n / 2 {
        return Err(Error::CutoffTooLarge {
            cutoff,
            half: n / 2,
        });
    }
    let mut spec = grid.samples.clone();
    transform_nd(&mut spec, grid.dim, n, false)?;
    let scale = 1.0 / grid.len() as f64;
    let mut poly = TrigPoly::zero(grid.dim)?;
    let mut discarded = 0.0;
    let mut freq = vec![0i64; grid.dim];
    for (k, c) in spec.iter().enumerate() {
        let nyquist = signed_frequency(k, grid.dim, n, &mut freq);
        let c = c * scale;
        if nyquist || freq.iter().any(|f| f.unsigned_abs() as usize > cutoff) {
            discarded += c.norm();
            continue;
        }
        let c = c * shift_phase(grid.shift, n, &freq).conj();
        poly.accumulate(MultiIndex(freq.clone()), c);
    }
    Ok(Spectrum { poly, discarded })
}

/// [`coefficients`] with the largest admissible cutoff `N/2 - 1`.
pub fn all_coefficients(grid: &GridFunction) -> Result<Spectrum> {
    coefficients(grid, grid.n / 2 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_samples_to_ones() {
        let p = TrigPoly::constant(1, c(1.0, 0.0)).unwrap();
        let g = sample(&p, 4).unwrap();
        assert!(g.samples().iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn monomial_z1z2_at_quarter_turn() {
        let p = TrigPoly::monomial(&[1, 1], c(1.0, 0.0)).unwrap();
        let g = sample(&p, 4).unwrap();
        // grid index (1, 1) is (pi/2, pi/2)
        let z = g.samples()[4 + 1];
        assert!((z - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sample_refuses_aliasing_and_bad_sizes() {
        let p = TrigPoly::monomial(&[3], c(1.0, 0.0)).unwrap();
        assert_eq!(
            sample(&p, 4).unwrap_err(),
            Error::GridTooSmall { n: 4, required: 8 }
        );
        assert!(sample(&p, 8).is_ok());
        assert_eq!(sample(&p, 12).unwrap_err(), Error::GridNotPowerOfTwo(12));
    }

    #[test]
    fn coefficients_of_constant_grid() {
        let g = GridFunction::constant(2, 8, c(1.0, 0.0)).unwrap();
        let s = coefficients(&g, 3).unwrap();
        let pruned = s.poly.pruned(1e-14);
        assert_eq!(pruned.len(), 1);
        assert!((pruned.coeff(&[0, 0]) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(coefficients(&g, 4).is_err());
    }

    #[test]
    fn half_cell_round_trip() {
        let p = TrigPoly::from_terms(
            2,
            [
                ([2, -1], c(0.5, 1.0)),
                ([-3, 0], c(-2.0, 0.25)),
                ([0, 0], c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let g = sample_shifted(&p, 16, GridShift::HalfCell).unwrap();
        let t = g.theta(5 * 16 + 3);
        assert!((g.samples()[5 * 16 + 3] - p.eval(&t).unwrap()).norm() < 1e-13);
        let back = coefficients(&g, 7).unwrap().poly;
        assert!(back.max_coeff_diff(&p).unwrap() < 1e-14);
    }

    #[test]
    fn projections_on_polynomials() {
        // e^{-i t} + 2 e^{i t} + e^{3 i t}
        let psi = TrigPoly::from_dense_1d(
            -1,
            &[
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(2.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ],
        );
        let plus = psi.riesz_project();
        assert_eq!(plus.len(), 2);
        assert_eq!(plus.coeff(&[1]), c(2.0, 0.0));
        assert_eq!(plus.coeff(&[3]), c(1.0, 0.0));
        let minus = psi.riesz_project_minus().unwrap();
        assert_eq!(minus, TrigPoly::monomial(&[-1], c(1.0, 0.0)).unwrap());
        assert_eq!(plus.add(&minus).unwrap(), psi);
    }

    #[test]
    fn partial_projection_cases() {
        let x = TrigPoly::monomial(&[1, -1], c(1.0, 0.0)).unwrap();
        assert_eq!(x.partial_project(&[0]).unwrap(), x);
        assert!(x.partial_project(&[1]).unwrap().is_empty());
        assert_eq!(
            x.partial_project(&[2]).unwrap_err(),
            Error::InvalidAxis { axis: 2, dim: 2 }
        );
        assert_eq!(x.partial_project(&[]).unwrap_err(), Error::EmptyAxes);
    }

    #[test]
    fn minus_projection_rejects_higher_dimensions() {
        let x = TrigPoly::monomial(&[1, -1], c(1.0, 0.0)).unwrap();
        assert!(x.riesz_project_minus().is_err());
    }

    #[test]
    fn homogeneity() {
        let f = TrigPoly::from_terms(
            2,
            [
                ([2, 0], c(1.0, 0.0)),
                ([1, 1], c(0.5, 0.0)),
                ([0, 2], c(-1.0, 0.0)),
            ],
        )
        .unwrap();
        assert!(f.is_homogeneous2().unwrap());
        let g = TrigPoly::from_terms(2, [([1, 1], c(1.0, 0.0)), ([1, 0], c(1.0, 0.0))]).unwrap();
        assert!(!g.is_homogeneous2().unwrap());
        assert!(TrigPoly::zero(1).unwrap().is_homogeneous2().is_err());
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let mut p = TrigPoly::monomial(&[1], c(1.0, 0.0)).unwrap();
        p.add_term(&[1], c(-1.0, 0.0)).unwrap();
        assert!(p.is_empty());
        assert!(p.add_term(&[1, 2], c(1.0, 0.0)).is_err());
    }

    #[test]
    fn multi_index_norm_is_exact_for_large_entries() {
        let a = MultiIndex::new(vec![1 << 20, -(1 << 20), 3]).unwrap();
        assert_eq!(a.norm_sq(), 2 * (1u128 << 40) + 9);
        assert!(MultiIndex::new(vec![]).is_err());
    }
}
