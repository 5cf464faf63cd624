//! Search for violation certificates: polynomials `psi` with
//! `||P_+ psi||_p > ||psi||_q`.
//!
//! Four candidate families are scored: random polynomials, the extremal
//! kernels of `k_w` (d = 1), the 2-homogeneous family (d = 2) and shifted
//! spherical Dirichlet kernels. The best candidate of each family is then
//! improved by coordinate ascent on its coefficients. A certificate is only
//! emitted if the ratio still exceeds `1 + CERTIFICATE_MARGIN` on a grid of
//! twice the resolution.
//!
//! For `q = infinity` the grid maximum of `|psi|` is inflated by
//! `prod_i sec(pi m_i / N)`, `m_i` the degree in axis `i`, which bounds the
//! true supremum of a trigonometric polynomial from its samples. Without
//! this, grid maxima would undercount `||psi||_inf` and fake violations.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use riesz_core::dirichlet::{spherical_dirichlet, DirichletSpec, DEFAULT_LATTICE_CAP};
use riesz_core::homog2::{build_family, Homog2Family};
use riesz_core::norms::{conjugate, lp_norm, nonlinear_map};
use riesz_core::rpk::{rpk_extremal_function, KernelPoint};
use riesz_core::{all_coefficients, sample, Complex64, NormExponent, SeriesControl, TrigPoly};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{LabError, Result};
use crate::formats::{exponent, PolyJson};

pub const CERTIFICATE_MARGIN: f64 = 1e-8;
/// Grid points per axis per unit of bandwidth.
pub const OVERSAMPLING: usize = 4;
/// Relative size below which extracted coefficients are dropped.
const PRUNE: f64 = 1e-14;
pub const THREADS_ENV: &str = "RIESZ_LAB_THREADS";

pub const RPK_RADII: [f64; 8] = [0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
pub const HOMOG2_EPS: [f64; 4] = [0.02, 0.05, 0.1, 0.15];
const DIRICHLET_SHIFTS: [f64; 3] = [0.0, 0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Random,
    Rpk,
    Homog2,
    Dirichlet,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Rpk => "rpk",
            Family::Homog2 => "homog2",
            Family::Dirichlet => "dirichlet",
        }
    }
}

/// `||P_+ psi||_p / ||psi||_q` evaluated on an `n^d` grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub grid: usize,
}

/// Smallest admissible power-of-two grid for `psi`, at least `base`.
pub fn eval_grid(psi: &TrigPoly, base: usize) -> usize {
    let need = OVERSAMPLING * (psi.bandwidth() as usize + 1);
    base.max(need.next_power_of_two())
}

/// Upper bound for `||psi||_inf` from the samples on an `n^d` grid.
pub fn sup_upper_bound(psi: &TrigPoly, n: usize) -> Result<f64> {
    let g = sample(psi, n)?;
    let mut factor = 1.0;
    for axis in 0..psi.dim() {
        if let Some((lo, hi)) = psi.degree_range(axis) {
            let m = lo.unsigned_abs().max(hi.unsigned_abs()) as f64;
            factor /= (PI * m / n as f64).cos();
        }
    }
    Ok(g.max_abs() * factor)
}

pub fn eval_ratio(psi: &TrigPoly, q: f64, p: f64, n: usize) -> Result<Ratio> {
    let rhs = if q.is_infinite() {
        sup_upper_bound(psi, n)?
    } else {
        lp_norm(&sample(psi, n)?, NormExponent::from_f64(q)?)?
    };
    let plus = psi.riesz_project();
    let lhs = if plus.is_empty() {
        0.0
    } else {
        lp_norm(&sample(&plus, n)?, NormExponent::from_f64(p)?)?
    };
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    Ok(Ratio {
        lhs,
        rhs,
        ratio,
        grid: n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationCertificate {
    pub d: usize,
    #[serde(with = "exponent")]
    pub q: f64,
    #[serde(with = "exponent")]
    pub p: f64,
    pub psi: PolyJson,
    pub ratio: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub seed: u64,
    pub grid: usize,
    pub family: Family,
    /// Ratio recomputed on a grid with twice the resolution.
    pub verified_ratio: f64,
    pub verified_grid: usize,
}

impl ViolationCertificate {
    pub fn psi(&self) -> Result<TrigPoly> {
        TrigPoly::try_from(&self.psi)
    }

    /// Recomputes the ratio from the stored polynomial at the stored grid.
    pub fn recompute(&self) -> Result<Ratio> {
        eval_ratio(&self.psi()?, self.q, self.p, self.grid)
    }

    pub fn is_valid(&self) -> bool {
        self.ratio > 1.0 + CERTIFICATE_MARGIN && self.verified_ratio > 1.0 + CERTIFICATE_MARGIN
    }
}

/// Best candidate of one family after ascent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyBest {
    pub family: Family,
    pub candidates: usize,
    pub start_ratio: f64,
    pub ratio: f64,
    pub ascent_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub d: usize,
    #[serde(with = "exponent")]
    pub q: f64,
    #[serde(with = "exponent")]
    pub p: f64,
    pub seed: u64,
    pub budget: usize,
    pub evaluations: usize,
    pub best_ratio: f64,
    pub families: Vec<FamilyBest>,
    pub certificate: Option<ViolationCertificate>,
    pub note: &'static str,
}

const NOTE: &str = "witnesses come from a generic search over fixed families; \
                    no externally constructed extremal witness is used";

#[derive(Debug, Clone)]
struct Candidate {
    family: Family,
    psi: TrigPoly,
    ratio: Ratio,
}

fn coeff_key(p: &TrigPoly) -> Vec<(Vec<i64>, u64, u64)> {
    p.terms()
        .map(|(a, c)| (a.entries().to_vec(), c.re.to_bits(), c.im.to_bits()))
        .collect()
}

/// Max by ratio; ties go to the lexicographically smaller coefficient table,
/// so the winner does not depend on evaluation order.
fn better(a: Candidate, b: Candidate) -> Candidate {
    match a.ratio.ratio.total_cmp(&b.ratio.ratio) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if coeff_key(&b.psi) < coeff_key(&a.psi) {
                b
            } else {
                a
            }
        }
    }
}

/// Seeded generator for candidate `index` of `family`.
fn candidate_rng(seed: u64, family: Family, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((family as u64) << 32) | index as u64);
    rng
}

fn random_degree(d: usize) -> i64 {
    match d {
        1 => 6,
        2 => 3,
        _ => 2,
    }
}

fn random_candidate(d: usize, rng: &mut ChaCha8Rng) -> Result<TrigPoly> {
    let deg = random_degree(d);
    let box_len = (2 * deg + 1).pow(d as u32) as usize;
    let terms = rng.random_range(1..=box_len.min(24));
    let mut p = TrigPoly::zero(d)?;
    for _ in 0..terms {
        let alpha: Vec<i64> = (0..d).map(|_| rng.random_range(-deg..=deg)).collect();
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        p.add_term(&alpha, c)?;
    }
    Ok(p)
}

/// Coefficients of grid samples, with negligible ones dropped.
fn extract(g: &riesz_core::GridFunction) -> Result<TrigPoly> {
    let poly = all_coefficients(g)?.poly;
    let peak = poly.terms().fold(0.0f64, |m, (_, c)| m.max(c.norm()));
    Ok(poly.pruned(PRUNE * peak))
}

fn rpk_candidates(q: f64) -> Result<Vec<TrigPoly>> {
    if q <= 1.0 {
        return Ok(Vec::new());
    }
    let q_star = conjugate(q)?;
    RPK_RADII
        .iter()
        .map(|&r| {
            let w = KernelPoint::real(r)?;
            let f = rpk_extremal_function(&w, q_star, 256)?;
            extract(&nonlinear_map(&f, q_star))
        })
        .collect()
}

fn homog2_candidates(q: f64, ctl: SeriesControl) -> Result<Vec<TrigPoly>> {
    if q <= 1.0 {
        return Ok(Vec::new());
    }
    HOMOG2_EPS
        .iter()
        .map(|&eps| {
            let fam = Homog2Family::from_q(eps, q, ctl)?;
            let (_, psi) = build_family(&fam, 128)?;
            extract(&psi)
        })
        .collect()
}

fn dirichlet_radii(d: usize) -> &'static [f64] {
    match d {
        1 => &[2.0, 4.0, 8.0, 16.0],
        2 => &[1.5, 2.5, 4.0, 6.0],
        _ => &[1.0, 1.5, 2.5],
    }
}

fn dirichlet_candidates(d: usize) -> Result<Vec<TrigPoly>> {
    let mut out = Vec::new();
    for &r in dirichlet_radii(d) {
        let spec = DirichletSpec::new(r, d)?;
        let kernel = spherical_dirichlet(&spec, DEFAULT_LATTICE_CAP)?;
        for &frac in &DIRICHLET_SHIFTS {
            let s = -(frac * r).floor() as i64;
            let shift = TrigPoly::monomial(&vec![s; d], Complex64::new(1.0, 0.0))?;
            out.push(kernel.mul(&shift)?);
        }
    }
    Ok(out)
}

struct Setup {
    q: f64,
    p: f64,
    base_grid: usize,
}

impl Setup {
    fn score(&self, family: Family, psi: TrigPoly) -> Result<Candidate> {
        let ratio = eval_ratio(&psi, self.q, self.p, eval_grid(&psi, self.base_grid))?;
        Ok(Candidate { family, psi, ratio })
    }

    /// Coordinate ascent over real and imaginary parts of each coefficient,
    /// with the support held fixed. Returns the improved candidate and the
    /// number of evaluations spent.
    fn ascend(&self, start: Candidate, sweeps: usize) -> Result<(Candidate, usize)> {
        let mut best = start;
        let alphas: Vec<Vec<i64>> = best
            .psi
            .terms()
            .map(|(a, _)| a.entries().to_vec())
            .collect();
        let scale = best.psi.terms().fold(0.0f64, |m, (_, c)| m.max(c.norm()));
        let mut step = 0.1 * scale;
        let mut evals = 0;
        for _ in 0..sweeps {
            let mut improved = false;
            for alpha in &alphas {
                for dir in [
                    Complex64::new(1.0, 0.0),
                    Complex64::new(-1.0, 0.0),
                    Complex64::new(0.0, 1.0),
                    Complex64::new(0.0, -1.0),
                ] {
                    let mut trial = best.psi.clone();
                    trial.add_term(alpha, dir * step)?;
                    if trial.is_empty() {
                        continue;
                    }
                    let cand = self.score(best.family, trial)?;
                    evals += 1;
                    if cand.ratio.ratio > best.ratio.ratio {
                        best = cand;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        Ok((best, evals))
    }
}

fn pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| LabError::invalid(format!("{THREADS_ENV} must be a positive integer")))?;
        if n == 0 {
            return Err(LabError::invalid(format!(
                "{THREADS_ENV} must be a positive integer"
            )));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| LabError::invalid(format!("thread pool: {e}")))
}

/// Runs the search. Absence of a certificate is a normal outcome.
pub fn violation_search(d: usize, q: f64, p: f64, cfg: &RunConfig) -> Result<SearchReport> {
    if !(1..=3).contains(&d) {
        return Err(LabError::invalid(format!("dimension {d} outside 1..=3")));
    }
    if !(q >= 1.0) {
        return Err(LabError::invalid("q must be at least 1"));
    }
    NormExponent::from_f64(p)?;
    cfg.validate()?;
    let setup = Setup {
        q,
        p,
        base_grid: cfg.grid_for(d),
    };

    let mut starts: Vec<(Family, TrigPoly)> = Vec::new();
    for i in 0..cfg.budget {
        let mut rng = candidate_rng(cfg.seed, Family::Random, i);
        starts.push((Family::Random, random_candidate(d, &mut rng)?));
    }
    if d == 1 {
        starts.extend(rpk_candidates(q)?.into_iter().map(|p| (Family::Rpk, p)));
    }
    if d == 2 {
        starts.extend(
            homog2_candidates(q, cfg.series()?)?
                .into_iter()
                .map(|p| (Family::Homog2, p)),
        );
    }
    starts.extend(
        dirichlet_candidates(d)?
            .into_iter()
            .map(|p| (Family::Dirichlet, p)),
    );

    let pool = pool()?;
    let scored: Vec<Candidate> = pool.install(|| {
        starts
            .into_par_iter()
            .map(|(f, psi)| setup.score(f, psi))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut evaluations = scored.len();

    let mut heads: Vec<(Family, usize, Candidate)> = Vec::new();
    for c in scored {
        match heads.iter_mut().find(|(f, _, _)| *f == c.family) {
            Some((_, count, best)) => {
                *count += 1;
                *best = better(best.clone(), c);
            }
            None => heads.push((c.family, 1, c)),
        }
    }
    heads.sort_by_key(|(f, _, _)| *f);

    let ascended: Vec<(FamilyBest, Candidate)> = pool.install(|| {
        heads
            .into_par_iter()
            .map(|(family, count, start)| {
                let start_ratio = start.ratio.ratio;
                let (best, steps) = setup.ascend(start, cfg.ascent_sweeps)?;
                Ok((
                    FamilyBest {
                        family,
                        candidates: count,
                        start_ratio,
                        ratio: best.ratio.ratio,
                        ascent_steps: steps,
                    },
                    best,
                ))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut families = Vec::new();
    let mut winner: Option<Candidate> = None;
    for (fb, cand) in ascended {
        evaluations += fb.ascent_steps;
        families.push(fb);
        winner = Some(match winner {
            None => cand,
            Some(w) => better(w, cand),
        });
    }
    let winner = winner.expect("every search scores at least one candidate");

    let mut certificate = None;
    if winner.ratio.ratio > 1.0 + CERTIFICATE_MARGIN {
        let fine = 2 * winner.ratio.grid;
        let check = eval_ratio(&winner.psi, q, p, fine)?;
        evaluations += 1;
        let cert = ViolationCertificate {
            d,
            q,
            p,
            psi: PolyJson::from(&winner.psi),
            ratio: winner.ratio.ratio,
            lhs: winner.ratio.lhs,
            rhs: winner.ratio.rhs,
            seed: cfg.seed,
            grid: winner.ratio.grid,
            family: winner.family,
            verified_ratio: check.ratio,
            verified_grid: fine,
        };
        if cert.is_valid() {
            certificate = Some(cert);
        }
    }

    Ok(SearchReport {
        d,
        q,
        p,
        seed: cfg.seed,
        budget: cfg.budget,
        evaluations,
        best_ratio: winner.ratio.ratio,
        families,
        certificate,
        note: NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_bound_dominates_fine_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..=2 {
            for _ in 0..20 {
                let psi = random_candidate(d, &mut rng).unwrap();
                let n = eval_grid(&psi, 8);
                let bound = sup_upper_bound(&psi, n).unwrap();
                let fine = sample(&psi, if d == 1 { 4096 } else { 256 })
                    .unwrap()
                    .max_abs();
                assert!(fine <= bound * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn constants_have_ratio_one() {
        let c = TrigPoly::constant(2, Complex64::new(0.0, 3.0)).unwrap();
        for (q, p) in [(2.0, 2.0), (f64::INFINITY, 4.0), (4.0 / 3.0, 1.0)] {
            let r = eval_ratio(&c, q, p, 8).unwrap();
            assert!((r.ratio - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn ties_break_on_coefficients() {
        let r = Ratio {
            lhs: 1.0,
            rhs: 1.0,
            ratio: 1.0,
            grid: 8,
        };
        let a = Candidate {
            family: Family::Random,
            psi: TrigPoly::constant(1, Complex64::new(2.0, 0.0)).unwrap(),
            ratio: r,
        };
        let b = Candidate {
            psi: TrigPoly::constant(1, Complex64::new(1.0, 0.0)).unwrap(),
            ..a.clone()
        };
        assert_eq!(better(a.clone(), b.clone()).psi, b.psi);
        assert_eq!(better(b.clone(), a).psi, b.psi);
    }
}
