//! Built-in invariant suite run by the `selftest` subcommand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riesz_core::dirichlet::{lattice_count, DirichletSpec, DEFAULT_LATTICE_CAP};
use riesz_core::extremal::{blaschke_inner, theorem_l1_check};
use riesz_core::homog2::{projection_structure, Homog2Family, DEFAULT_GRID};
use riesz_core::norms::{conjectured_exponent, lp_norm, nonlinear_map};
use riesz_core::rpk::rpk_coefficient_check;
use riesz_core::{
    all_coefficients, sample, Complex64, GridFunction, GridShift, NormExponent, SeriesControl,
    TrigPoly,
};

use crate::error::{LabError, Result};
use crate::figures::{figure_csv, figure_table};
use crate::formats::{poly_from_json, poly_to_json, read_grid, write_grid};

const SEED: u64 = 0x5eed;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(LabError::invalid(what()))
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_poly(rng: &mut ChaCha8Rng, dim: usize, deg: i64, terms: usize) -> TrigPoly {
    let mut p = TrigPoly::zero(dim).expect("dim >= 1");
    for _ in 0..terms {
        let alpha: Vec<i64> = (0..dim).map(|_| rng.random_range(-deg..=deg)).collect();
        p.add_term(
            &alpha,
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        )
        .expect("dimension matches");
    }
    p
}

fn polys() -> Vec<TrigPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..60)
        .map(|i| random_poly(&mut rng, 1 + i % 3, 4, 10))
        .collect()
}

fn idempotence() -> Result<()> {
    for p in polys() {
        let once = p.riesz_project();
        ensure(once.riesz_project() == once, || "P_+ not idempotent".into())?;
    }
    Ok(())
}

fn self_adjointness() -> Result<()> {
    let ps = polys();
    for pair in ps.chunks(2) {
        let (f, g) = (&pair[0], &pair[1]);
        if f.dim() != g.dim() {
            continue;
        }
        let lhs = f.riesz_project().inner(g)?;
        let rhs = f.inner(&g.riesz_project())?;
        ensure(lhs == rhs, || {
            format!("<P_+f,g> = {lhs} but <f,P_+g> = {rhs}")
        })?;
    }
    Ok(())
}

fn partial_composition() -> Result<()> {
    for p in polys().into_iter().filter(|p| p.dim() >= 2) {
        let both: Vec<usize> = (0..p.dim()).collect();
        let step = p.partial_project(&[0])?.partial_project(&both[1..])?;
        ensure(step == p.partial_project(&both)?, || {
            "partial projections do not compose".into()
        })?;
        ensure(step == p.riesz_project(), || {
            "full partial projection differs from P_+".into()
        })?;
    }
    Ok(())
}

fn one_variable_split() -> Result<()> {
    for p in polys().into_iter().filter(|p| p.dim() == 1) {
        let sum = p.riesz_project().add(&p.riesz_project_minus()?)?;
        ensure(sum == p, || "P_+ + P_- differs from identity".into())?;
    }
    Ok(())
}

fn parseval_and_round_trip() -> Result<()> {
    for p in polys() {
        let n = if p.dim() == 1 { 64 } else { 16 };
        let g = sample(&p, n)?;
        let two = lp_norm(&g, NormExponent::Finite(2.0))?;
        let exact = p.l2_norm_sq();
        ensure((two * two - exact).abs() <= 1e-12 * exact.max(1.0), || {
            format!("Parseval: {} vs {exact}", two * two)
        })?;
        let back = all_coefficients(&g)?.poly;
        let scale = p.terms().fold(1.0f64, |m, (_, c)| m.max(c.norm()));
        ensure(back.max_coeff_diff(&p)? <= 1e-12 * scale, || {
            "round trip drifted".into()
        })?;
    }
    Ok(())
}

/// `(d1, d2, q)` grid of 200 points on which the functional equation is tested.
pub fn functional_equation_grid() -> Vec<(u32, u32, f64)> {
    let mut pts = Vec::new();
    for d1 in 1..=2u32 {
        for d2 in 1..=2u32 {
            let d = (d1 + d2) as f64;
            let q_min = 2.0 * d / (d + 1.0);
            for k in 0..49 {
                pts.push((d1, d2, q_min + 0.01 + 0.25 * k as f64));
            }
            pts.push((d1, d2, f64::INFINITY));
        }
    }
    pts
}

/// Largest `|a_{d1}(a_{d2}(q)) - a_{d1+d2}(q)|` over the grid.
pub fn functional_equation_defect() -> Result<f64> {
    let mut worst = 0.0f64;
    for (d1, d2, q) in functional_equation_grid() {
        let composed = conjectured_exponent(d1, conjectured_exponent(d2, q)?)?;
        let direct = conjectured_exponent(d1 + d2, q)?;
        worst = worst.max((composed - direct).abs());
    }
    Ok(worst)
}

fn functional_equation() -> Result<()> {
    let worst = functional_equation_defect()?;
    ensure(worst <= 1e-12, || {
        format!("functional equation defect {worst:e}")
    })
}

fn four_norm_of_bounded_symbols() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for _ in 0..100 {
        let psi = random_poly(&mut rng, 1, 8, 17);
        let g = sample(&psi, 256)?;
        let plus = sample(&psi.riesz_project(), 256)?;
        let lhs = lp_norm(&plus, NormExponent::Finite(4.0))?;
        ensure(lhs <= g.max_abs() + 1e-10, || {
            format!("||P_+psi||_4 = {lhs} above sup")
        })?;
    }
    Ok(())
}

fn blaschke_equality() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for _ in 0..10 {
        let k = rng.random_range(0..4);
        let zeros: Vec<Complex64> = (0..k)
            .map(|_| {
                Complex64::from_polar(
                    rng.random_range(0.0..0.9),
                    rng.random_range(0.0..core::f64::consts::TAU),
                )
            })
            .collect();
        let b = blaschke_inner(&zeros, 512)?;
        let plus = b.riesz_project()?.grid;
        let lhs = lp_norm(&plus, NormExponent::Finite(4.0))?;
        ensure((lhs - 1.0).abs() <= 1e-9, || {
            format!("Blaschke 4-norm {lhs}")
        })?;
    }
    Ok(())
}

pub fn l1_example() -> Result<(f64, f64)> {
    let psi = TrigPoly::from_terms(
        1,
        [
            ([-1i64], c(1.0, 0.0)),
            ([1], c(2.0, 0.0)),
            ([3], c(1.0, 0.0)),
        ],
    )?;
    let check = theorem_l1_check(&sample(&psi, 512)?)?;
    Ok((check.lhs, check.rhs))
}

fn geometric_mean_example() -> Result<()> {
    let (lhs, rhs) = l1_example()?;
    ensure(
        (lhs - 2.0).abs() <= 1e-9 && (rhs - 2.0).abs() <= 1e-9,
        || format!("example gives lhs {lhs}, rhs {rhs}"),
    )
}

fn kernel_coefficients() -> Result<()> {
    for q in [4.0 / 3.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY] {
        let q_star = riesz_core::norms::conjugate(q)?;
        ensure(rpk_coefficient_check(q, 4.0 / q_star, 50)?.holds(), || {
            format!("q = {q}")
        })?;
        let over = rpk_coefficient_check(q, 4.0 / q_star + 0.01, 50)?;
        ensure(over.first_violation == Some(1), || {
            format!("no violation at q = {q}")
        })?;
    }
    Ok(())
}

fn nonlinear_map_identities() -> Result<()> {
    let g = GridFunction::from_fn(1, 32, GridShift::Lattice, |t| {
        c(2.0 + t[0].cos(), t[0].sin())
    })?;
    ensure(nonlinear_map(&g, 2.0) == g, || {
        "N_2 is not the identity".into()
    })?;
    let u = g.map(|z| z / z.norm());
    ensure(nonlinear_map(&u, 3.5).max_diff(&u)? <= 1e-15, || {
        "N_p moves unimodular input".into()
    })
}

fn homog2_structure() -> Result<()> {
    let fam = Homog2Family::new(0.1, 3.0, SeriesControl::default())?;
    let s = projection_structure(&fam, DEFAULT_GRID)?;
    ensure(
        s.antisymmetry <= 1e-12 && s.off_support <= 1e-10 && s.homogeneity_defect <= 1e-12,
        || format!("{s:?}"),
    )
}

fn lattice_counts() -> Result<()> {
    for (r, d, want) in [(5.0, 2, 81), (10.0, 2, 317), (2.0, 3, 33)] {
        let got = lattice_count(&DirichletSpec::new(r, d)?, DEFAULT_LATTICE_CAP)?;
        ensure(got == want, || {
            format!("N({r}, {d}) = {got}, expected {want}")
        })?;
    }
    Ok(())
}

fn format_round_trips() -> Result<()> {
    for p in polys() {
        ensure(poly_from_json(&poly_to_json(&p))? == p, || {
            "JSON round trip".into()
        })?;
        let n = if p.dim() == 1 { 32 } else { 16 };
        let g = sample(&p, n)?;
        let mut buf = Vec::new();
        write_grid(&g, &mut buf)?;
        ensure(read_grid(buf.as_slice())? == g, || "RLGF round trip".into())?;
    }
    Ok(())
}

fn figure_determinism() -> Result<()> {
    for d in [1, 2] {
        let a = figure_csv(&figure_table(d)?);
        let b = figure_csv(&figure_table(d)?);
        ensure(a == b, || format!("figure table {d} not deterministic"))?;
    }
    Ok(())
}

pub type Check = (&'static str, fn() -> Result<()>);

pub const CHECKS: &[Check] = &[
    ("projection_idempotence", idempotence),
    ("projection_self_adjointness", self_adjointness),
    ("partial_projection_composition", partial_composition),
    ("one_variable_split", one_variable_split),
    ("parseval_and_round_trip", parseval_and_round_trip),
    ("exponent_functional_equation", functional_equation),
    ("four_norm_of_bounded_symbols", four_norm_of_bounded_symbols),
    ("blaschke_equality", blaschke_equality),
    ("geometric_mean_example", geometric_mean_example),
    ("kernel_coefficients", kernel_coefficients),
    ("nonlinear_map_identities", nonlinear_map_identities),
    ("homog2_structure", homog2_structure),
    ("lattice_counts", lattice_counts),
    ("format_round_trips", format_round_trips),
    ("figure_determinism", figure_determinism),
];

#[derive(Debug, Clone)]
pub struct SelftestReport {
    /// Check name and failure message, `None` on success.
    pub results: Vec<(&'static str, Option<String>)>,
}

impl SelftestReport {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|(_, e)| e.is_none()).count()
    }

    pub fn failed(&self) -> usize {
        self.results.len() - self.passed()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, err) in &self.results {
            match err {
                None => out.push_str(&format!("PASS {name}\n")),
                Some(e) => out.push_str(&format!("FAIL {name}: {e}\n")),
            }
        }
        out.push_str(&format!(
            "{} passed, {} failed\n",
            self.passed(),
            self.failed()
        ));
        out
    }
}

pub fn run_selftest() -> SelftestReport {
    let results = CHECKS
        .iter()
        .map(|(name, check)| (*name, check().err().map(|e| e.to_string())))
        .collect();
    SelftestReport { results }
}
