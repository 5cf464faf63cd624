//! Acceptance suite: one timed PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riesz_core::dirichlet::growth_fit;
use riesz_core::extremal::{blaschke_inner, dual_extremal_solve, theorem_l1_check};
use riesz_core::homog2::{
    ab_series, default_p_grid, fit_expansion, norm_margin, projection_structure,
    psi_norm_quadrature, psi_norm_series, threshold_scan, Homog2Family, FIT_EPS,
    THRESHOLD_RESOLUTION,
};
use riesz_core::norms::{conjugate, lp_norm};
use riesz_core::rpk::{kernel_poly, kernel_samples, kw_norm, rpk_coefficient_check, KernelPoint};
use riesz_core::{sample, Complex64, NormExponent, SeriesControl, TrigPoly};
use riesz_lab::figures::{figure_csv, figure_table};
use riesz_lab::selftest::{
    functional_equation_defect, functional_equation_grid, l1_example, random_poly, run_selftest,
};

type Outcome = Result<String, String>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: riesz_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_laurent(rng: &mut ChaCha8Rng, deg: i64) -> TrigPoly {
    let terms: Vec<([i64; 1], Complex64)> = (-deg..=deg)
        .map(|k| {
            (
                [k],
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    TrigPoly::from_terms(1, terms).expect("dimension one")
}

fn four_norm_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let deg = rng.random_range(0..=8);
        let psi = random_laurent(&mut rng, deg);
        let sup = core(sample(&psi, 256))?.max_abs();
        let plus = core(sample(&psi.riesz_project(), 256))?;
        let lhs = core(lp_norm(&plus, NormExponent::Finite(4.0)))?;
        worst = worst.max(lhs - sup);
    }
    check(worst <= 1e-10, || format!("max excess {worst:e}"))?;
    let mut dev = 0.0f64;
    for _ in 0..20 {
        let k = rng.random_range(0..5);
        let zeros: Vec<Complex64> = (0..k)
            .map(|_| {
                Complex64::from_polar(
                    rng.random_range(0.0..0.9),
                    rng.random_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();
        let b = core(blaschke_inner(&zeros, 512))?;
        let plus = core(b.riesz_project())?.grid;
        let lhs = core(lp_norm(&plus, NormExponent::Finite(4.0)))?;
        let rhs = core(lp_norm(&b, NormExponent::Infinity))?;
        dev = dev.max((lhs - rhs).abs());
    }
    check(dev <= 1e-9, || format!("Blaschke deviation {dev:e}"))?;
    Ok(format!(
        "max excess {worst:.3e}; Blaschke deviation {dev:.1e}"
    ))
}

fn geometric_mean_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let deg = rng.random_range(1..=8);
        let psi = random_laurent(&mut rng, deg);
        worst = worst.min(core(theorem_l1_check(&core(sample(&psi, 512))?))?.gap);
    }
    check(worst >= -1e-9, || format!("min gap {worst:e}"))?;
    let (lhs, rhs) = l1_example().map_err(|e| e.to_string())?;
    check(
        (lhs - 2.0).abs() <= 1e-9 && (rhs - 2.0).abs() <= 1e-9,
        || format!("example lhs {lhs}, rhs {rhs}"),
    )?;
    Ok(format!(
        "min gap {worst:.3e}; example lhs {lhs:.12} rhs {rhs:.12}"
    ))
}

fn kernel_inequality() -> Outcome {
    for q in [4.0 / 3.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY] {
        let q_star = core(conjugate(q))?;
        let sharp = core(rpk_coefficient_check(q, 4.0 / q_star, 50))?;
        check(sharp.holds(), || {
            format!("coefficient check fails at q = {q}")
        })?;
        let over = core(rpk_coefficient_check(q, 4.0 / q_star + 0.01, 50))?;
        check(over.first_violation == Some(1), || {
            format!("q = {q}: first violation {:?}", over.first_violation)
        })?;
    }
    let ctl = core(SeriesControl::new(4000, 1e-16))?;
    let mut worst = 0.0f64;
    for r in [0.0, 0.25, 0.5, 0.81] {
        let w = core(KernelPoint::from_r(r))?;
        let grid = core(kernel_samples(&w, 1024))?;
        for p in [0.5, 1.0, 4.0 / 3.0, 2.0, 3.0] {
            let series = core(core(kw_norm(&w, p, &ctl))?.require())?;
            let quad = core(lp_norm(&grid, NormExponent::Finite(p)))?;
            worst = worst.max((series - quad).abs());
        }
    }
    check(worst <= 1e-9, || format!("series vs quadrature {worst:e}"))?;
    Ok(format!("6 exponents ok; series vs quadrature {worst:.1e}"))
}

fn dual_solver() -> Outcome {
    let w = core(KernelPoint::real(0.5))?;
    let phi = kernel_poly(&w, 40);
    let t = core(dual_extremal_solve(&phi, 4.0 / 3.0, 160, 1e-10))?;
    let want = 0.75f64.powf(-0.25);
    let err = (t.value - want).abs();
    check(err <= 1e-4, || format!("value {} vs {want}", t.value))?;
    Ok(format!(
        "value {:.10} vs {want:.10}, error {err:.1e}, {} iterations",
        t.value, t.diagnostics.iterations
    ))
}

fn homog2_series() -> Outcome {
    let ctl = SeriesControl::default();
    let mut series_err = 0.0f64;
    for q in [1.5, 2.0, 3.0, 4.0] {
        for eps in [0.05, 0.1, 0.2] {
            let fam = core(Homog2Family::from_q(eps, q, ctl))?;
            let s = core(psi_norm_series(&fam))?.value;
            let quad = core(psi_norm_quadrature(&fam, 128))?;
            series_err = series_err.max((s - quad).abs());
        }
    }
    check(series_err <= 1e-9, || {
        format!("psi norm series vs quadrature {series_err:e}")
    })?;
    let mut ab_err = 0.0f64;
    for q_star in [1.5, 3.0, 4.0, 6.0] {
        for eps in [0.05, 0.1, 0.2] {
            let fam = core(Homog2Family::new(eps, q_star, ctl))?;
            let s = core(projection_structure(&fam, 128))?;
            let ab = core(ab_series(&fam))?;
            ab_err = ab_err.max((s.a - ab.a).abs()).max((s.b - ab.b).abs());
        }
    }
    check(ab_err <= 1e-10, || format!("(a, b) vs FFT {ab_err:e}"))?;
    let mut fit_err = 0.0f64;
    for (q_star, p) in [(4.0, 1.0), (3.0, 0.5), (1.5, 2.0), (2.0, 1.0), (6.0, 3.0)] {
        let fit = core(fit_expansion(q_star, p, FIT_EPS, &ctl))?;
        fit_err = fit_err.max(fit.max_rel_error());
    }
    check(fit_err <= 0.01, || {
        format!("expansion fit relative error {fit_err:e}")
    })?;
    Ok(format!(
        "series {series_err:.1e}; (a,b) {ab_err:.1e}; fit relative error {fit_err:.1e}"
    ))
}

fn thresholds() -> Outcome {
    let ctl = SeriesControl::default();
    let mut worst = 0.0f64;
    for q in [1.5, 2.0, 4.0, f64::INFINITY] {
        let scan = core(threshold_scan(
            q,
            &[0.1, 0.05, 0.025],
            &default_p_grid(),
            THRESHOLD_RESOLUTION,
            &ctl,
        ))?;
        let lim = scan
            .extrapolated
            .ok_or_else(|| format!("no extrapolation at q = {q}"))?;
        worst = worst.max((lim - scan.target).abs());
    }
    check(worst <= 0.02, || format!("extrapolation error {worst}"))?;
    let scan = core(threshold_scan(
        4.0 / 3.0,
        &[0.05],
        &default_p_grid(),
        THRESHOLD_RESOLUTION,
        &ctl,
    ))?;
    let row = &scan.rows[0];
    check(row.grid_threshold.is_none(), || {
        format!(
            "q = 4/3, eps = 0.05: grid point {:?} survives",
            row.grid_threshold
        )
    })?;
    let fam = core(Homog2Family::from_q(0.02, 1.2, ctl))?;
    let gm = core(norm_margin(&fam, NormExponent::GeometricMean))?;
    check(gm < 0.0, || format!("q = 1.2 geometric-mean margin {gm:e}"))?;
    let sliver = row
        .threshold_p
        .map_or("none".to_string(), |p| format!("{p:.4}"));
    Ok(format!(
        "extrapolation error {worst:.1e}; q=4/3 grid survivors none (bisected below grid: {sliver}); q=1.2 margin {gm:.2e}"
    ))
}

fn dirichlet_growth() -> Outcome {
    let radii: Vec<f64> = (1..=8).map(|i| 5.0 * i as f64).collect();
    let fit = core(growth_fit(2, 1.0, &radii, None))?;
    check((0.35..=0.65).contains(&fit.exponent), || {
        format!("exponent {}", fit.exponent)
    })?;
    Ok(format!(
        "exponent {:.4}, c_hat {:.4}",
        fit.exponent, fit.c_hat
    ))
}

fn structural() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut parseval = 0.0f64;
    for i in 0..300 {
        let dim = 1 + i % 3;
        let f = random_poly(&mut rng, dim, 4, 12);
        let g = random_poly(&mut rng, dim, 4, 12);
        let once = f.riesz_project();
        check(once.riesz_project() == once, || "idempotence".into())?;
        let lhs = core(f.riesz_project().inner(&g))?;
        let rhs = core(f.inner(&g.riesz_project()))?;
        check(lhs == rhs, || format!("self-adjointness {lhs} vs {rhs}"))?;
        if dim >= 2 {
            let composed = core(core(f.partial_project(&[1]))?.partial_project(&[0]))?;
            check(composed == core(f.partial_project(&[0, 1]))?, || {
                "partial composition".into()
            })?;
        }
        let n = if dim == 1 { 64 } else { 16 };
        let grid = core(sample(&f, n))?;
        let two = core(lp_norm(&grid, NormExponent::Finite(2.0)))?;
        let exact = f.l2_norm_sq();
        parseval = parseval.max((two * two - exact).abs() / exact.max(1.0));
    }
    check(parseval <= 1e-12, || format!("Parseval {parseval:e}"))?;
    let points = functional_equation_grid().len();
    let defect = functional_equation_defect().map_err(|e| e.to_string())?;
    check(points == 200 && defect <= 1e-12, || {
        format!("functional equation {defect:e} on {points} points")
    })?;
    let report = run_selftest();
    check(report.failed() == 0, || report.render())?;
    Ok(format!(
        "Parseval {parseval:.1e}; functional equation {defect:.1e} on {points} points; selftest {}/{}",
        report.passed(),
        report.results.len()
    ))
}

fn figure_data() -> Outcome {
    let one = figure_csv(&figure_table(1).map_err(|e| e.to_string())?);
    let two = figure_csv(&figure_table(2).map_err(|e| e.to_string())?);
    check(
        one == figure_csv(&figure_table(1).map_err(|e| e.to_string())?),
        || "d=1 not deterministic".into(),
    )?;
    check(
        two == figure_csv(&figure_table(2).map_err(|e| e.to_string())?),
        || "d=2 not deterministic".into(),
    )?;
    let has = |table: &str, prefix: &str| table.lines().any(|l| l.starts_with(prefix));
    for row in [
        "1.333333333333,1.000000000000,1.000000000000,",
        "2.000000000000,2.000000000000,2.000000000000,",
        "inf,4.000000000000,4.000000000000,",
    ] {
        check(has(&one, row), || format!("d=1 missing row {row}"))?;
    }
    for row in [
        "1.333333333333,0.000000000000,0.000000000000,",
        "inf,3.000000000000,",
    ] {
        check(has(&two, row), || format!("d=2 missing row {row}"))?;
    }
    Ok(format!(
        "{} + {} rows, byte-identical reruns",
        one.lines().count() - 1,
        two.lines().count() - 1
    ))
}

type Criterion = (u32, &'static str, f64, fn() -> Outcome);

const CRITERIA: &[Criterion] = &[
    (
        1,
        "four-norm bound for bounded symbols",
        10.0,
        four_norm_bound,
    ),
    (
        2,
        "geometric-mean inequality",
        10.0,
        geometric_mean_inequality,
    ),
    (3, "reproducing-kernel inequality", 5.0, kernel_inequality),
    (4, "dual extremal value for k_0.5", 60.0, dual_solver),
    (5, "2-homogeneous series", 120.0, homog2_series),
    (6, "threshold limit", 120.0, thresholds),
    (7, "Dirichlet kernel growth rate", 120.0, dirichlet_growth),
    (8, "structural invariants", 60.0, structural),
    (9, "figure data", 5.0, figure_data),
];

fn main() -> ExitCode {
    let mut failed = 0;
    for &(id, name, budget, run) in CRITERIA {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match outcome {
            Ok(d) if secs <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {id} ({name}) [{secs:.2}s / {budget}s]: {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("{} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
