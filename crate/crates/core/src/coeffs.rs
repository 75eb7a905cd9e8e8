//! Weights `c_j` for the dyadic reflection nodes `-2^j`.
//!
//! A `C^k` operator only needs the moment conditions
//! `sum_j c_j (-2^j)^q = 1` for `0 <= q <= k`, so we keep exactly `k + 1`
//! weights: the Lagrange weights of the nodes `-1, -2, ..., -2^k`
//! evaluated at `1`. They are built in exact rational arithmetic; the
//! floating-point shadow is a double-double derived once at construction.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::value::DoubleF64;

/// Requested smoothness of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Finite(usize),
    /// `k = infinity`; certified only up to a cap.
    Infinite,
}

impl Smoothness {
    /// The finite order actually enforced, `min(k, k_max)` for infinite requests.
    pub fn resolve(self, k_max: usize) -> usize {
        match self {
            Smoothness::Finite(k) => k,
            Smoothness::Infinite => k_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeeleyCoefficients {
    order_k: usize,
    weights: Vec<BigRational>,
    shadow: Vec<DoubleF64>,
}

/// The reflection node `-2^j` as an exact integer.
pub fn node(j: usize) -> BigInt {
    -(BigInt::one() << j)
}

/// Weights satisfying the moment conditions exactly for every `q <= k`.
pub fn compute_coefficients(k: usize) -> SeeleyCoefficients {
    let one = BigRational::one();
    let nodes: Vec<BigRational> = (0..=k).map(|i| BigRational::from_integer(node(i))).collect();
    let weights: Vec<BigRational> = (0..=k)
        .map(|j| {
            let mut c = one.clone();
            for (i, xi) in nodes.iter().enumerate() {
                if i != j {
                    c *= (&one - xi) / (&nodes[j] - xi);
                }
            }
            c
        })
        .collect();
    let shadow = weights.iter().map(to_double_double).collect();
    SeeleyCoefficients {
        order_k: k,
        weights,
        shadow,
    }
}

fn to_double_double(r: &BigRational) -> DoubleF64 {
    let hi = r.to_f64().expect("finite weight");
    let hi_exact = BigRational::from_float(hi).expect("finite float");
    let lo = (r - hi_exact).to_f64().expect("finite remainder");
    DoubleF64 { hi, lo }
}

impl SeeleyCoefficients {
    pub fn for_smoothness(smoothness: Smoothness, k_max: usize) -> Self {
        compute_coefficients(smoothness.resolve(k_max))
    }

    pub fn order_k(&self) -> usize {
        self.order_k
    }

    /// Number of nonzero weights, `N = k + 1`.
    pub fn count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn shadow(&self) -> &[DoubleF64] {
        &self.shadow
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.shadow.iter().map(|w| w.to_f64()).collect()
    }

    /// `sum_j c_j (-2^j)^q - 1`, exactly.
    pub fn verify_moments(&self, q: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for (j, c) in self.weights.iter().enumerate() {
            let power = BigRational::from_integer(num_traits::pow(node(j), q));
            acc += c * power;
        }
        acc - BigRational::one()
    }

    /// `sum_j |c_j| (2^j)^q`, exactly.
    pub fn decay_sum(&self, q: usize) -> BigRational {
        self.weights
            .iter()
            .enumerate()
            .map(|(j, c)| c.abs() * BigRational::from_integer(BigInt::one() << (j * q)))
            .fold(BigRational::zero(), |acc, v| acc + v)
    }

    pub fn decay_sum_f64(&self, q: usize) -> f64 {
        self.decay_sum(q).to_f64().unwrap_or(f64::INFINITY)
    }

    /// Numerator/denominator pairs as decimal strings.
    pub fn exact_strings(&self) -> Vec<(String, String)> {
        self.weights
            .iter()
            .map(|c| (c.numer().to_string(), c.denom().to_string()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn low_order_weights() {
        assert_eq!(compute_coefficients(0).weights(), &[q(1, 1)]);
        assert_eq!(compute_coefficients(1).weights(), &[q(3, 1), q(-2, 1)]);
        assert_eq!(compute_coefficients(2).weights(), &[q(5, 1), q(-5, 1), q(1, 1)]);
        assert_eq!(
            compute_coefficients(3).weights(),
            &[q(45, 7), q(-15, 2), q(9, 4), q(-5, 28)]
        );
    }

    #[test]
    fn moment_residuals() {
        let c = compute_coefficients(1);
        assert!(c.verify_moments(0).is_zero());
        assert!(c.verify_moments(1).is_zero());
        assert_eq!(c.verify_moments(2), q(-6, 1));
    }

    #[test]
    fn decay_sums() {
        assert_eq!(compute_coefficients(0).decay_sum(5), q(1, 1));
        assert_eq!(compute_coefficients(1).decay_sum(0), q(5, 1));
        assert_eq!(compute_coefficients(1).decay_sum(1), q(7, 1));
    }

    #[test]
    fn shadow_is_double_double() {
        let c = compute_coefficients(3);
        assert_eq!(c.weights_f64()[0], 45.0 / 7.0);
        // 45/7 is not a binary fraction, so the low word carries information.
        assert!(c.shadow()[0].lo != 0.0);
        assert_eq!(c.shadow()[1], DoubleF64 { hi: -7.5, lo: 0.0 });
    }

    #[test]
    fn infinite_smoothness_is_capped() {
        let c = SeeleyCoefficients::for_smoothness(Smoothness::Infinite, 8);
        assert_eq!(c.order_k(), 8);
        assert_eq!(c.count(), 9);
        assert_eq!(Smoothness::Finite(3).resolve(8), 3);
    }

    #[test]
    fn exact_strings_are_reduced() {
        let c = compute_coefficients(3);
        assert_eq!(
            c.exact_strings(),
            vec![
                ("45".into(), "7".into()),
                ("-15".into(), "2".into()),
                ("9".into(), "4".into()),
                ("-5".into(), "28".into())
            ]
        );
    }
}
