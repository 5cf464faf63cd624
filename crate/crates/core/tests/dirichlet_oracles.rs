use riesz_core::dirichlet::*;
use riesz_core::{sample_shifted, GridShift, NormExponent};

#[test]
fn parseval_and_symmetry() {
    for &(r, d) in &[(3.5, 1), (4.0, 2), (2.5, 3)] {
        let spec = DirichletSpec::new(r, d).unwrap();
        let count = lattice_count(&spec, DEFAULT_LATTICE_CAP).unwrap();
        let poly = spherical_dirichlet(&spec, DEFAULT_LATTICE_CAP).unwrap();
        assert_eq!(poly.len(), count);
        assert_eq!(poly.l2_norm_sq(), count as f64);
        let two =
            dirichlet_norm(&spec, NormExponent::Finite(2.0), None, DEFAULT_LATTICE_CAP).unwrap();
        assert!((two * two - count as f64).abs() < 1e-10);
        let grid = sample_shifted(
            &poly,
            required_grid(&spec, NormExponent::Finite(1.0)),
            GridShift::HalfCell,
        )
        .unwrap();
        assert!(grid.samples().iter().all(|z| z.im.abs() <= 1e-12));
    }
}

#[test]
fn l1_norms_increase_with_radius() {
    let mut prev = 0.0;
    for r in [5.0, 10.0, 20.0, 40.0] {
        let spec = DirichletSpec::new(r, 2).unwrap();
        let v =
            dirichlet_norm(&spec, NormExponent::Finite(1.0), None, DEFAULT_LATTICE_CAP).unwrap();
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn small_exponents_are_dominated_by_one() {
    for r in [3.0, 6.0, 9.0] {
        let spec = DirichletSpec::new(r, 2).unwrap();
        let one =
            dirichlet_norm(&spec, NormExponent::Finite(1.0), None, DEFAULT_LATTICE_CAP).unwrap();
        for p in [0.3, 0.6, 0.9] {
            let v =
                dirichlet_norm(&spec, NormExponent::Finite(p), None, DEFAULT_LATTICE_CAP).unwrap();
            assert!(v <= one + 1e-9);
        }
    }
}

#[test]
fn growth_rates() {
    let radii: Vec<f64> = (1..=8).map(|i| 5.0 * i as f64).collect();
    let fit = growth_fit(2, 1.0, &radii, None).unwrap();
    assert!((fit.exponent - 0.5).abs() < 0.15);
    assert!(fit.c_hat > 0.0);
    // the classical Lebesgue constant grows only logarithmically
    let radii: Vec<f64> = (1..=8).map(|i| 4.0 * i as f64).collect();
    let fit = growth_fit(1, 1.0, &radii, None).unwrap();
    assert!(fit.exponent.abs() < 0.3);
    let fit = growth_fit(3, 0.8, &[3.0, 6.0, 9.0, 12.0], None).unwrap();
    assert!((fit.exponent - 1.0).abs() < 0.25);
}
