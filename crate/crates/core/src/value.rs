//! Values in the target space `F`, realised as finite real vectors.
//!
//! The formula layer only adds values and scales them, so any dimension works.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{two_prod, two_sum};

pub type Value = Vec<f64>;

pub fn zeros(dim: usize) -> Value {
    vec![0.0; dim]
}

/// `acc += alpha * x`
pub fn axpy(acc: &mut [f64], alpha: f64, x: &[f64]) {
    for (a, v) in acc.iter_mut().zip(x) {
        *a += alpha * v;
    }
}

pub fn scale(x: &mut [f64], alpha: f64) {
    for v in x {
        *v *= alpha;
    }
}

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

/// A real number stored as an unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DoubleF64 {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleF64 {
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Compensated accumulation of `sum_j c_j * v_j` for double-double weights.
///
/// The result carries roughly twice the working precision before the final
/// rounding, so cancellation between large weighted terms does not leak
/// into the result.
#[derive(Debug, Clone)]
pub struct CompensatedSum {
    sum: Vec<f64>,
    err: Vec<f64>,
}

impl CompensatedSum {
    pub fn new(dim: usize) -> Self {
        Self {
            sum: vec![0.0; dim],
            err: vec![0.0; dim],
        }
    }

    pub fn add_weighted(&mut self, weight: DoubleF64, x: &[f64]) {
        for ((s, e), &v) in self.sum.iter_mut().zip(self.err.iter_mut()).zip(x) {
            let (p, pe) = two_prod(weight.hi, v);
            let (ns, se) = two_sum(*s, p);
            *s = ns;
            *e += se + pe + weight.lo * v;
        }
    }

    pub fn finish(self) -> Value {
        self.sum.iter().zip(&self.err).map(|(s, e)| s + e).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_survives_cancellation() {
        let big = DoubleF64 { hi: 1e16, lo: 0.0 };
        let one = DoubleF64 { hi: 1.0, lo: 0.0 };
        let mut acc = CompensatedSum::new(1);
        acc.add_weighted(big, &[1.0]);
        acc.add_weighted(one, &[1.0]);
        acc.add_weighted(big, &[-1.0]);
        assert_eq!(acc.finish(), vec![1.0]);
    }

    #[test]
    fn axpy_and_norms() {
        let mut a = vec![1.0, 2.0];
        axpy(&mut a, 2.0, &[1.0, -1.0]);
        assert_eq!(a, vec![3.0, 0.0]);
        assert_eq!(max_abs(&[-4.0, 1.0]), 4.0);
        assert_eq!(max_abs_diff(&[1.0, 2.0], &[1.5, 2.0]), 0.5);
    }
}
