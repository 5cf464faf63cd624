#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riesz_core::{Complex64, TrigPoly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random one-variable polynomial with frequencies in `-deg..=deg`.
pub fn random_laurent(rng: &mut impl Rng, deg: i64) -> TrigPoly {
    let terms: Vec<([i64; 1], Complex64)> = (-deg..=deg)
        .map(|k| {
            (
                [k],
                c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    TrigPoly::from_terms(1, terms).unwrap()
}

/// Random polynomial on `T^dim` with each frequency in `-deg..=deg`.
pub fn random_poly(rng: &mut impl Rng, dim: usize, deg: i64, terms: usize) -> TrigPoly {
    let mut p = TrigPoly::zero(dim).unwrap();
    for _ in 0..terms {
        let alpha: Vec<i64> = (0..dim).map(|_| rng.random_range(-deg..=deg)).collect();
        p.add_term(
            &alpha,
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
        )
        .unwrap();
    }
    p
}
