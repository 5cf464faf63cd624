//! Radix-2 complex FFT and its separable extension to `N^d` row-major grids.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods exist only when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Precomputed radix-2 plan for one transform length.
#[derive(Debug, Clone)]
pub struct Radix2 {
    n: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<usize>,
}

impl Radix2 {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::GridNotPowerOfTwo(n));
        }
        let bits = n.trailing_zeros();
        let bitrev = (0..n)
            .map(|i| i.reverse_bits() >> (usize::BITS - bits))
            .collect();
        // Each twiddle is evaluated directly; no recurrence, so no drift.
        let twiddles = (0..n / 2)
            .map(|k| {
                let angle = -2.0 * PI * k as f64 / n as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        Ok(Self {
            n,
            twiddles,
            bitrev,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized in-place transform. `inverse` flips the exponent sign.
    pub fn process(&self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.n);
        for i in 0..self.n {
            let j = self.bitrev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= self.n {
            let half = len / 2;
            let stride = self.n / len;
            for start in (0..self.n).step_by(len) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

/// In-place unnormalized transform along every axis of a row-major `n^dim` grid.
///
/// Forward uses `exp(-i...)`; the caller divides by `n^dim` where needed.
pub fn transform_nd(data: &mut [Complex64], dim: usize, n: usize, inverse: bool) -> Result<()> {
    let plan = Radix2::new(n)?;
    let total = n.checked_pow(dim as u32).ok_or(Error::EmptyGrid)?;
    if data.len() != total {
        return Err(Error::ShapeMismatch {
            expected: total,
            found: data.len(),
        });
    }
    let mut scratch = alloc::vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim {
        // Elements along `axis` are `stride` apart; axis 0 is slowest.
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = stride * n;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                if stride == 1 {
                    plan.process(&mut data[base..base + n], inverse);
                    continue;
                }
                for (k, s) in scratch.iter_mut().enumerate() {
                    *s = data[base + k * stride];
                }
                plan.process(&mut scratch, inverse);
                for (k, s) in scratch.iter().enumerate() {
                    data[base + k * stride] = *s;
                }
            }
        }
    }
    Ok(())
}
