//! Independent oracles and property harnesses.
//!
//! Every harness takes its randomness from a seeded ChaCha stream, so a
//! report is reproducible bit for bit from `(suite, seed)`.

pub mod fd;
pub mod report;
pub mod suites;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use fd::{fd_jet, one_sided_limit, FdEstimate, FdJetOracle, JetLadder, Scheme};
pub use report::{Measure, PropertyReport, Tally};
pub use suites::{run_suite, SUITES};

/// Solve `sum_j c_j (-2^j)^q = 1`, `q = 0..=k`, by exact Gaussian
/// elimination. Independent of the Lagrange closed form.
pub fn vandermonde_solve(k: usize) -> Vec<BigRational> {
    let n = k + 1;
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|q| {
            let mut row: Vec<BigRational> = (0..n)
                .map(|j| {
                    let node = -(BigInt::one() << j);
                    BigRational::from_integer(num_traits::pow(node, q))
                })
                .collect();
            row.push(BigRational::one());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .expect("Vandermonde matrix with distinct nodes is invertible");
        rows.swap(col, pivot);
        let inv = BigRational::one() / rows[col][col].clone();
        for v in rows[col].iter_mut() {
            *v *= inv.clone();
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (v, p) in rows[r].iter_mut().zip(pivot_row) {
                    *v -= factor.clone() * p;
                }
            }
        }
    }
    rows.into_iter().map(|mut r| r.pop().unwrap_or_default()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::compute_coefficients;

    #[test]
    fn vandermonde_matches_lagrange() {
        for k in 0..=8 {
            assert_eq!(vandermonde_solve(k), compute_coefficients(k).weights());
        }
    }
}
