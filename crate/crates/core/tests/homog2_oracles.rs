use riesz_core::homog2::*;
use riesz_core::norms::lp_norm;
use riesz_core::{sample, Complex64, NormExponent, SeriesControl, TrigPoly};

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

#[test]
fn central_binomial_moment_by_quadrature() {
    let f2 = TrigPoly::from_terms(
        2,
        [
            ([2i64, 0], Complex64::new(1.0, 0.0)),
            ([0, 2], Complex64::new(-1.0, 0.0)),
        ],
    )
    .unwrap();
    let g = sample(&f2, 64).unwrap();
    let m6 = lp_norm(&g, NormExponent::Finite(6.0)).unwrap().powi(6);
    assert!((m6 - f2_even_norms(3)).abs() < 1e-10);
}

#[test]
fn modulus_identity_on_grid() {
    let eps = 0.1;
    let f = sample(&family_poly(eps), 64).unwrap();
    let f2 = sample(
        &TrigPoly::from_terms(
            2,
            [
                ([2i64, 0], Complex64::new(1.0, 0.0)),
                ([0, 2], Complex64::new(-1.0, 0.0)),
            ],
        )
        .unwrap(),
        64,
    )
    .unwrap();
    for (a, b) in f.samples().iter().zip(f2.samples()) {
        assert!((a.norm_sqr() - 1.0 - eps * eps * b.norm_sqr()).abs() < 1e-14);
    }
}

#[test]
fn identity_map_at_q_star_two() {
    let fam = Homog2Family::new(0.1, 2.0, ctl()).unwrap();
    let (f, psi) = build_family(&fam, 64).unwrap();
    assert!(psi.max_diff(&sample(&f, 64).unwrap()).unwrap() == 0.0);
}

#[test]
fn psi_series_matches_quadrature() {
    for &q in &[1.5, 2.0, 3.0, 4.0] {
        for &eps in &[0.05, 0.1, 0.2] {
            let fam = Homog2Family::from_q(eps, q, ctl()).unwrap();
            let series = psi_norm_series(&fam).unwrap().value;
            let quad = psi_norm_quadrature(&fam, DEFAULT_GRID).unwrap();
            assert!((series - quad).abs() < 1e-9, "q={q} eps={eps}");
        }
    }
    let fam = Homog2Family::new(0.2, 1.0, ctl()).unwrap();
    let (_, psi) = build_family(&fam, 64).unwrap();
    assert!((lp_norm(&psi, NormExponent::Infinity).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn projection_structure_and_homogeneity() {
    for &q_star in &[1.5, 3.0, 4.0, 6.0] {
        for &eps in &[0.05, 0.2] {
            let fam = Homog2Family::new(eps, q_star, ctl()).unwrap();
            let s = projection_structure(&fam, DEFAULT_GRID).unwrap();
            let ab = ab_series(&fam).unwrap();
            assert!((s.a - ab.a).abs() < 1e-10);
            assert!((s.b - ab.b).abs() < 1e-10);
            assert!(s.antisymmetry < 1e-12);
            assert!(s.off_support < 1e-10);
            assert!(s.homogeneity_defect < 1e-12);
            // doubling the grid changes nothing
            let s2 = projection_structure(&fam, 2 * DEFAULT_GRID).unwrap();
            assert!((s.a - s2.a).abs() < 1e-12);
        }
    }
}

#[test]
fn phi_norms_approach_geometric_mean() {
    let fam = Homog2Family::new(0.1, 3.0, ctl()).unwrap();
    let gm = phi_norm_series(&fam, NormExponent::GeometricMean)
        .unwrap()
        .norm
        .value;
    let p01 = phi_norm_series(&fam, NormExponent::Finite(0.1))
        .unwrap()
        .norm
        .value;
    let p001 = phi_norm_series(&fam, NormExponent::Finite(0.01))
        .unwrap()
        .norm
        .value;
    assert!(gm <= p001 && p001 <= p01);
    assert!(p001 - gm < p01 - gm);
}

#[test]
fn small_eps_limit() {
    let fam = Homog2Family::new(1e-9, 3.0, ctl()).unwrap();
    for p in [
        NormExponent::GeometricMean,
        NormExponent::Finite(1.0),
        NormExponent::Infinity,
    ] {
        assert!((phi_norm_series(&fam, p).unwrap().norm.value - 1.0).abs() < 1e-15);
    }
    let ab = ab_series(&fam).unwrap();
    assert!((ab.a - 1.0).abs() < 1e-15 && (ab.b - 1.0).abs() < 1e-15);
}

#[test]
fn expansion_coefficients_fit() {
    for &(q_star, p) in &[(4.0, 1.0), (3.0, 0.5), (1.5, 2.0)] {
        let fit = fit_expansion(q_star, p, FIT_EPS, &ctl()).unwrap();
        assert!(fit.max_rel_error() < 0.01, "{q_star} {p}: {fit:?}");
    }
}

#[test]
fn thresholds_extrapolate_to_four_minus_q_star() {
    for &q in &[1.5, 2.0, 4.0, f64::INFINITY] {
        let scan = threshold_scan(
            q,
            &[0.1, 0.05, 0.025],
            &default_p_grid(),
            THRESHOLD_RESOLUTION,
            &ctl(),
        )
        .unwrap();
        assert!(
            (scan.extrapolated.unwrap() - scan.target).abs() < 0.02,
            "q={q}"
        );
    }
}

#[test]
fn endpoint_four_thirds() {
    let scan = threshold_scan(4.0 / 3.0, &[0.05, 0.025], &[0.1, 0.5, 1.0], 1e-6, &ctl()).unwrap();
    for row in &scan.rows {
        assert_eq!(row.grid_threshold, None);
        // a sliver of small exponents still survives at finite eps, shrinking with eps
        assert!(row.threshold_p.unwrap() < 0.011);
    }
    assert!(scan.rows[1].threshold_p < scan.rows[0].threshold_p);
}

#[test]
fn geometric_mean_fails_below_four_thirds() {
    let fam = Homog2Family::from_q(0.02, 1.2, ctl()).unwrap();
    assert!(norm_margin(&fam, NormExponent::GeometricMean).unwrap() < 0.0);
}

#[test]
fn geometric_mean_margin_matches_grid() {
    let fam = Homog2Family::from_q(0.02, 1.2, ctl()).unwrap();
    let (_, psi) = build_family(&fam, 128).unwrap();
    let phi = psi.riesz_project().unwrap().grid;
    let lhs = lp_norm(&psi, NormExponent::Finite(1.2)).unwrap();
    let gm = lp_norm(&phi, NormExponent::GeometricMean).unwrap();
    let series = norm_margin(&fam, NormExponent::GeometricMean).unwrap();
    assert!(lhs - gm < 0.0);
    assert!(
        (lhs - gm - series).abs() < 1e-12,
        "{} vs {series}",
        lhs - gm
    );
}
