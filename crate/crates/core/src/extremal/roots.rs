//! Polynomial roots (Aberth-Ehrlich) and Jensen's formula on the circle.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fourier::TrigPoly;

const MAX_ITER: usize = 800;

/// `p(z) / p'(z)` for ascending coefficients, evaluated through the reversed
/// polynomial when `|z| > 1` to avoid overflow.
fn newton_ratio(c: &[Complex64], z: Complex64) -> Complex64 {
    let deg = c.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = c[deg];
        let mut dp = Complex64::new(0.0, 0.0);
        for k in (0..deg).rev() {
            dp = dp * z + p;
            p = p * z + c[k];
        }
        p / dp
    } else {
        // p(z) = z^deg r(w) with w = 1/z and r(w) = sum c_k w^(deg-k).
        let w = z.inv();
        let mut r = c[0];
        let mut dr = Complex64::new(0.0, 0.0);
        for &ck in &c[1..=deg] {
            dr = dr * w + r;
            r = r * w + ck;
        }
        // p'/p = deg/z - w^2 r'(w)/r(w)
        let inv_ratio = z.inv() * deg as f64 - w * w * dr / r;
        inv_ratio.inv()
    }
}

fn residual_ok(c: &[Complex64], z: Complex64) -> bool {
    let deg = c.len() - 1;
    let inside = z.norm() <= 1.0;
    let x = if inside { z } else { z.inv() };
    let mut p = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    for k in 0..=deg {
        let ck = if inside { c[deg - k] } else { c[k] };
        p = p * x + ck;
        bound = bound * x.norm() + ck.norm();
    }
    p.norm() <= 64.0 * deg as f64 * f64::EPSILON * bound
}

/// All roots of `sum_k c[k] z^k`. The leading coefficient must be nonzero.
pub fn polynomial_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    if lead.norm() == 0.0 {
        return Err(Error::OutOfDomain("leading coefficient is zero"));
    }
    if deg == 1 {
        return Ok(alloc::vec![-c[0] / lead]);
    }
    // Start on a circle whose radius is the geometric mean of the root moduli
    // (or a Fujiwara-type bound when c[0] = 0).
    let radius = if c[0].norm() > 0.0 {
        (c[0].norm() / lead.norm()).powf(1.0 / deg as f64)
    } else {
        (0..deg)
            .map(|k| (c[k].norm() / lead.norm()).powf(1.0 / (deg - k) as f64))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    };
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / deg as f64 + 0.4))
        .collect();
    for _ in 0..MAX_ITER {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let ratio = newton_ratio(c, z[i]);
            if !ratio.is_finite() {
                continue;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step <= 4.0 * f64::EPSILON {
            return Ok(z);
        }
    }
    // Clustered roots converge linearly; accept them if the residual is at
    // the rounding level.
    if z.iter().all(|&r| residual_ok(c, r)) {
        Ok(z)
    } else {
        Err(Error::RootNonConvergence)
    }
}

/// `mean log |p|` on the unit circle for a one-variable trigonometric
/// polynomial, by Jensen's formula.
pub fn jensen_log_mean(poly: &TrigPoly) -> Result<f64> {
    let Some((_, c)) = poly.dense_1d()? else {
        return Err(Error::AllZero);
    };
    // Leading and trailing entries of the dense vector are nonzero.
    let roots = polynomial_roots(&c)?;
    let inside: f64 = roots
        .iter()
        .map(|r| r.norm())
        .filter(|&m| m < 1.0)
        .map(|m| m.ln())
        .sum();
    Ok(c[0].norm().ln() - inside)
}

/// Geometric-mean norm `exp(mean log |p|)` of a polynomial on the circle.
pub fn polynomial_geometric_mean(poly: &TrigPoly) -> Result<f64> {
    Ok(jensen_log_mean(poly)?.exp())
}
