//! Numerical solution of the dual extremal problem on the circle.
//!
//! For an analytic polynomial `phi` we minimize `||phi + conj(phi0)||_q` over
//! `phi0 = sum_{k=1..K} c_k z^k`. The witness `f = N_q psi` of the minimizer
//! `psi` is analytic up to truncation, and `|<P_+ f, phi>| / ||P_+ f||_{q*}`
//! is a certified lower bound for the optimum.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fft::Radix2;
use crate::fourier::{GridFunction, GridShift, TrigPoly};
use crate::norms::{lp_norm, ExponentPair, NormExponent};
use crate::numeric::pairwise_map_sum;

/// Supported range of `q` for the solver.
pub const Q_RANGE: (f64, f64) = (1.05, 64.0);

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Degree of `phi0`; `None` means four times the degree of `phi`.
    pub trunc_degree: Option<usize>,
    /// Required duality gap.
    pub tol: f64,
    pub max_iter: usize,
    /// Grid size; `None` picks the smallest power of two at least
    /// `max(256, 8 (deg phi + K + 1))`.
    pub grid: Option<usize>,
    /// Number of stored L-BFGS pairs.
    pub memory: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            trunc_degree: None,
            tol: 1e-10,
            max_iter: 5000,
            grid: None,
            memory: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    /// `||psi||_q` at the returned point.
    pub primal: f64,
    /// Lower bound from the analytic part of the witness.
    pub dual: f64,
    /// `primal - dual`.
    pub duality_gap: f64,
    pub trunc_degree: usize,
    pub grid: usize,
    /// Primal value after each iteration, starting with the initial point.
    pub trace: Vec<f64>,
}

/// Natural kernel, extremal kernel and extremal function of one problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalTriple {
    pub natural_kernel: TrigPoly,
    /// `psi = phi + conj(phi0)` on the solver grid.
    pub extremal_kernel: GridFunction,
    /// `f` with `psi = N_{q*} f`, normalized to `||f||_{q*} = 1`.
    pub extremal_function: GridFunction,
    pub value: f64,
    pub q: ExponentPair,
    pub phi0: TrigPoly,
    pub diagnostics: SolverDiagnostics,
}

/// State of one objective evaluation.
struct Eval {
    value: f64,
    /// Gradient with respect to `conj(c_k)`, `k = 1..=K`.
    grad: Vec<Complex64>,
    /// Spectrum of `h = N_q psi / ||psi||_q^(q-1)`, scaled by `1/N`.
    h_hat: Vec<Complex64>,
    psi: Vec<Complex64>,
}

struct Problem<'a> {
    q: f64,
    n: usize,
    k: usize,
    fft: Radix2,
    phi: &'a [Complex64],
}

impl Problem<'_> {
    fn eval(&self, d: &[Complex64]) -> Eval {
        let n = self.n;
        let mut psi = vec![ZERO; n];
        psi[..self.phi.len()].copy_from_slice(self.phi);
        for (j, &dj) in d.iter().enumerate() {
            psi[n - 1 - j] += dj;
        }
        self.fft.process(&mut psi, true);
        let m = psi.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let q = self.q;
        let mean = pairwise_map_sum(&psi, |z| (z.norm() / m).powf(q)) / n as f64;
        let value = m * mean.powf(1.0 / q);
        let norm_factor = mean.powf((q - 1.0) / q);
        let mut h: Vec<Complex64> = psi
            .iter()
            .map(|&z| {
                let a = z.norm() / m;
                if a == 0.0 {
                    ZERO
                } else {
                    (z / m) * a.powf(q - 2.0) / norm_factor
                }
            })
            .collect();
        self.fft.process(&mut h, false);
        for c in h.iter_mut() {
            *c /= n as f64;
        }
        let grad = (1..=self.k).map(|j| h[n - j]).collect();
        Eval {
            value,
            grad,
            h_hat: h,
            psi,
        }
    }

    /// `|<P_+ h, phi>| / ||P_+ h||_{q*}`.
    fn dual(&self, e: &Eval) -> Result<f64> {
        let n = self.n;
        let mut w = vec![ZERO; n];
        w[..n / 2].copy_from_slice(&e.h_hat[..n / 2]);
        let pairing: Complex64 = self.phi.iter().zip(&w).map(|(p, h)| h * p.conj()).sum();
        self.fft.process(&mut w, true);
        let grid = GridFunction::new(1, n, GridShift::Lattice, w)?;
        let q_star = self.q / (self.q - 1.0);
        let norm = lp_norm(&grid, NormExponent::Finite(q_star))?;
        Ok(pairing.norm() / norm)
    }
}

fn real_dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}

/// Two-loop recursion: `-H g` for the stored pairs.
fn lbfgs_direction(
    grad: &[Complex64],
    pairs: &VecDeque<(Vec<Complex64>, Vec<Complex64>, f64)>,
) -> Vec<Complex64> {
    let mut r: Vec<Complex64> = grad.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * real_dot(s, &r);
        for (ri, yi) in r.iter_mut().zip(y) {
            *ri -= yi * a;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = pairs.back() {
        let gamma = real_dot(s, y) / real_dot(y, y);
        for ri in r.iter_mut() {
            *ri *= gamma;
        }
    }
    for ((s, y, rho), a) in pairs.iter().zip(alphas.into_iter().rev()) {
        let b = rho * real_dot(y, &r);
        for (ri, si) in r.iter_mut().zip(s) {
            *ri += si * (a - b);
        }
    }
    r.iter().map(|z| -z).collect()
}

fn analytic_degree(phi: &TrigPoly) -> Result<(usize, Vec<Complex64>)> {
    if phi.dim() != 1 {
        return Err(Error::UnsupportedDimension {
            supported: 1,
            found: phi.dim(),
        });
    }
    let Some((lo, coeffs)) = phi.dense_1d()? else {
        return Err(Error::AllZero);
    };
    if lo < 0 {
        return Err(Error::OutOfDomain("natural kernel must be analytic"));
    }
    let mut dense = vec![ZERO; lo as usize];
    dense.extend(coeffs);
    Ok((dense.len() - 1, dense))
}

/// Solves the dual extremal problem for `phi` with the given truncation
/// degree and duality-gap tolerance.
pub fn dual_extremal_solve(
    phi: &TrigPoly,
    q: f64,
    trunc_degree: usize,
    tol: f64,
) -> Result<ExtremalTriple> {
    let opts = SolverOptions {
        trunc_degree: Some(trunc_degree),
        tol,
        ..SolverOptions::default()
    };
    dual_extremal_solve_with(phi, q, &opts)
}

pub fn dual_extremal_solve_with(
    phi: &TrigPoly,
    q: f64,
    opts: &SolverOptions,
) -> Result<ExtremalTriple> {
    if !(q >= Q_RANGE.0 && q <= Q_RANGE.1) {
        return Err(Error::InvalidExponent {
            value: q,
            reason: "solver supports 1.05 <= q <= 64",
        });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::OutOfDomain("tolerance must be positive"));
    }
    let pair = ExponentPair::new(q)?;
    let (deg, dense) = analytic_degree(phi)?;
    let k = opts.trunc_degree.unwrap_or(4 * deg);
    let need = (8 * (deg + k + 1)).max(256).next_power_of_two();
    let n = match opts.grid {
        Some(g) if g < 2 * (deg.max(k) + 1) => {
            return Err(Error::GridTooSmall {
                n: g,
                required: 2 * (deg.max(k) + 1),
            })
        }
        Some(g) => g,
        None => need,
    };
    let problem = Problem {
        q,
        n,
        k,
        fft: Radix2::new(n)?,
        phi: &dense,
    };

    let mut x = vec![ZERO; k];
    let mut cur = problem.eval(&x);
    let mut trace = vec![cur.value];
    let mut pairs: VecDeque<(Vec<Complex64>, Vec<Complex64>, f64)> = VecDeque::new();
    let mut iterations = 0;
    let mut dual = problem.dual(&cur)?;
    let mut gap = cur.value - dual;

    while gap.abs() > opts.tol {
        // A vanishing gradient with a remaining gap means the truncation
        // degree, not the optimizer, limits the gap.
        if iterations >= opts.max_iter || real_dot(&cur.grad, &cur.grad).sqrt() <= 1e-14 {
            return Err(Error::SolverNonConvergence { iterations, gap });
        }
        iterations += 1;
        let mut dir = lbfgs_direction(&cur.grad, &pairs);
        let mut slope = real_dot(&cur.grad, &dir);
        if !(slope < 0.0) {
            pairs.clear();
            dir = cur.grad.iter().map(|g| -g).collect();
            slope = real_dot(&cur.grad, &dir);
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<Complex64> = x.iter().zip(&dir).map(|(a, p)| a + p * step).collect();
            let e = problem.eval(&trial);
            if e.value <= cur.value + 1e-4 * step * slope {
                accepted = Some((trial, e));
                break;
            }
            step *= 0.5;
        }
        let Some((next, e)) = accepted else {
            if pairs.is_empty() {
                // Even steepest descent stalls: rounding floor reached.
                return Err(Error::SolverNonConvergence { iterations, gap });
            }
            pairs.clear();
            continue;
        };
        let s: Vec<Complex64> = next.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<Complex64> = e.grad.iter().zip(&cur.grad).map(|(a, b)| a - b).collect();
        let sy = real_dot(&s, &y);
        if sy > 1e-300 {
            if pairs.len() == opts.memory.max(1) {
                pairs.pop_front();
            }
            pairs.push_back((s, y, 1.0 / sy));
        }
        x = next;
        cur = e;
        trace.push(cur.value);
        dual = problem.dual(&cur)?;
        gap = cur.value - dual;
    }

    // `h` is N_q psi scaled to unit L^{q*} norm.
    let h_grid = {
        let mut h = cur.h_hat.clone();
        problem.fft.process(&mut h, true);
        GridFunction::new(1, n, GridShift::Lattice, h)?
    };
    let phi0 = TrigPoly::from_dense_1d(1, &x.iter().map(|d| d.conj()).collect::<Vec<_>>());
    Ok(ExtremalTriple {
        natural_kernel: phi.clone(),
        extremal_kernel: GridFunction::new(1, n, GridShift::Lattice, cur.psi)?,
        extremal_function: h_grid,
        value: cur.value,
        q: pair,
        phi0,
        diagnostics: SolverDiagnostics {
            iterations,
            primal: cur.value,
            dual,
            duality_gap: gap,
            trunc_degree: k,
            grid: n,
            trace,
        },
    })
}

/// Change of the optimum between truncation degrees `4 deg` and `8 deg`.
pub fn truncation_drift(phi: &TrigPoly, q: f64, tol: f64) -> Result<f64> {
    let (deg, _) = analytic_degree(phi)?;
    let a = dual_extremal_solve(phi, q, 4 * deg, tol)?;
    let b = dual_extremal_solve(phi, q, 8 * deg, tol)?;
    Ok((a.value - b.value).abs())
}

/// `|<g, phi>| / ||g||_{q*}` for an analytic test function `g`, a lower
/// bound for the optimum by Hölder's inequality.
pub fn dual_lower_bound(phi: &TrigPoly, g: &TrigPoly, q: f64, n: usize) -> Result<f64> {
    let pair = ExponentPair::new(q)?;
    let pairing = g.inner(phi)?;
    let samples = crate::fourier::sample(g, n)?;
    Ok(pairing.norm() / lp_norm(&samples, NormExponent::Finite(pair.q_star()))?)
}
