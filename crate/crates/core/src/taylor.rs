//! Truncated univariate Taylor arithmetic.
//!
//! Convention: `c[k] = f^(k)(t0) / k!`. All series in one expression share
//! the same length.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

#[derive(Debug, Clone, PartialEq)]
pub struct Taylor {
    pub coeffs: Vec<f64>,
}

impl Taylor {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { coeffs }
    }

    /// The series of `t -> slope * (t - t0) + value` around `t0`.
    pub fn affine(value: f64, slope: f64, order: usize) -> Self {
        let mut s = Self::constant(value, order);
        if order >= 1 {
            s.coeffs[1] = slope;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `[f, f', f'', ...]` (unscaled derivatives).
    pub fn derivatives(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n];
        for (k, o) in out.iter_mut().enumerate() {
            for j in 0..=k {
                *o += self.coeffs[j] * other.coeffs[k - j];
            }
        }
        Self { coeffs: out }
    }

    pub fn recip(&self) -> Self {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut out = vec![0.0; n];
        out[0] = 1.0 / a[0];
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..=k {
                s += a[j] * out[k - j];
            }
            out[k] = -s / a[0];
        }
        Self { coeffs: out }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// `exp(a)` via `e_k = (1/k) sum_{j=1..k} j a_j e_{k-j}`.
    pub fn exp(&self) -> Self {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut out = vec![0.0; n];
        out[0] = math::exp(a[0]);
        for k in 1..n {
            let mut s = 0.0;
            for j in 1..=k {
                s += j as f64 * a[j] * out[k - j];
            }
            out[k] = s / k as f64;
        }
        Self { coeffs: out }
    }
}
