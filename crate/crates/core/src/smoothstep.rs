//! `C^inf` transition functions with exact-order derivatives.
//!
//! `S(x) = s(u) / (s(u) + s(1 - u))` with `u = (x - lo) / (hi - lo)` and
//! `s(u) = exp(-1/u)` for `u > 0`, `0` otherwise. `S` is exactly `0` on
//! `(-inf, lo]` and exactly `1` on `[hi, inf)`; derivatives are obtained by
//! truncated Taylor arithmetic through that closed form.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::taylor::Taylor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StepShape {
    /// The classical `exp(-1/x)` construction.
    ExpReciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SmoothStep {
    lo: f64,
    hi: f64,
    shape: StepShape,
}

/// Sampled suprema `M_p = sup { |S^(j)(t)| : t, 0 <= j <= p }`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CutoffConstants {
    pub order_p: usize,
    pub m_p: f64,
    pub grid_points: usize,
    pub resolution: f64,
}

pub fn make_step(lo: f64, hi: f64) -> Result<SmoothStep> {
    SmoothStep::new(lo, hi)
}

fn sigma_series(u0: f64, slope: f64, order: usize) -> Taylor {
    if u0 <= 0.0 || math::exp(-1.0 / u0) == 0.0 {
        return Taylor::constant(0.0, order);
    }
    Taylor::affine(u0, slope, order).recip().scale(-1.0).exp()
}

impl SmoothStep {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidStep { lo, hi });
        }
        Ok(Self {
            lo,
            hi,
            shape: StepShape::ExpReciprocal,
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn shape(&self) -> StepShape {
        self.shape
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_jet(x, 0)[0]
    }

    /// `[S(x), S'(x), ..., S^(order)(x)]`.
    pub fn eval_jet(&self, x: f64, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        if x <= self.lo {
            return out;
        }
        if x >= self.hi {
            out[0] = 1.0;
            return out;
        }
        let width = self.hi - self.lo;
        let u = (x - self.lo) / width;
        let a = sigma_series(u, 1.0 / width, order);
        let b = sigma_series(1.0 - u, -1.0 / width, order);
        a.div(&a.add(&b)).derivatives()
    }

    /// Grid estimate of `M_p` over `[lo, hi]`; outside that interval the
    /// derivatives vanish and the value is `0` or `1`, so the supremum over
    /// any larger interval is the same.
    pub fn sup_constants(&self, p: usize, grid_points: usize) -> CutoffConstants {
        let n = grid_points.max(2);
        let h = (self.hi - self.lo) / (n - 1) as f64;
        let mut m: f64 = 1.0;
        for i in 0..n {
            let x = self.lo + h * i as f64;
            for d in self.eval_jet(x, p) {
                m = m.max(d.abs());
            }
        }
        CutoffConstants {
            order_p: p,
            m_p: m,
            grid_points: n,
            resolution: h,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamped_and_midpoint_values() {
        let s = make_step(-1.0, -0.5).unwrap();
        assert_eq!(s.eval(-1.0), 0.0);
        assert_eq!(s.eval(-0.75), 0.5);
        assert_eq!(s.eval(-0.5), 1.0);
    }

    #[test]
    fn rejects_empty_interval() {
        assert_eq!(
            make_step(1.0, 1.0),
            Err(Error::InvalidStep { lo: 1.0, hi: 1.0 })
        );
        assert!(make_step(2.0, 1.0).is_err());
    }

    #[test]
    fn flat_regions_have_zero_jets() {
        let s = make_step(-1.0, -0.5).unwrap();
        assert_eq!(s.eval_jet(-0.25, 3), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.eval_jet(-2.0, 2), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn first_derivative_matches_central_difference() {
        let s = make_step(-1.0, -0.5).unwrap();
        let jet = s.eval_jet(-0.75, 1);
        let h = 1e-5;
        let fd = (s.eval(-0.75 + h) - s.eval(-0.75 - h)) / (2.0 * h);
        assert_eq!(jet[0], 0.5);
        assert!(jet[1] > 0.0);
        assert!((jet[1] - fd).abs() < 1e-8, "{} vs {fd}", jet[1]);
    }

    #[test]
    fn near_the_edges_stays_finite() {
        let s = make_step(0.0, 1.0).unwrap();
        for x in [1e-300, 1e-3, 1.0 - 1e-12, 1.0 - 1e-300] {
            for d in s.eval_jet(x, 8) {
                assert!(d.is_finite(), "x = {x}");
            }
        }
    }

    #[test]
    fn m0_is_one() {
        let s = make_step(-1.0, -0.5).unwrap();
        assert_eq!(s.sup_constants(0, 10_000).m_p, 1.0);
    }
}
