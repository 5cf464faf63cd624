//! Reductions with a fixed evaluation order.
//!
//! Every reduction over grid samples goes through [`pairwise_sum`] so that
//! results are bit-reproducible regardless of how the samples were produced.

use num_complex::Complex64;

const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (tree) summation with a fixed split point.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        let mut acc = 0.0;
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of `f(x)` over a slice without materializing the mapped values.
pub fn pairwise_map_sum<T, F: Fn(&T) -> f64 + Copy>(values: &[T], f: F) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        let mut acc = 0.0;
        for v in values {
            acc += f(v);
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_map_sum(&values[..mid], f) + pairwise_map_sum(&values[mid..], f)
}

/// Pairwise complex sum of `f(x)`.
pub fn pairwise_map_sum_c<T, F: Fn(&T) -> Complex64 + Copy>(values: &[T], f: F) -> Complex64 {
    if values.len() <= PAIRWISE_BLOCK {
        let mut acc = Complex64::new(0.0, 0.0);
        for v in values {
            acc += f(v);
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_map_sum_c(&values[..mid], f) + pairwise_map_sum_c(&values[mid..], f)
}

/// Neumaier compensated accumulator, used for long series.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive_on_small_input() {
        let v: [f64; 5] = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(pairwise_sum(&v), 15.0);
    }

    #[test]
    fn compensated_recovers_cancelled_terms() {
        let mut s = CompensatedSum::new();
        for x in [1e16, 1.0, -1e16] {
            s.add(x);
        }
        assert_eq!(s.value(), 1.0);
        assert_eq!(1e16 + 1.0 - 1e16, 0.0);
    }
}
