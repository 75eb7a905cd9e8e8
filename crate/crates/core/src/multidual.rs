//! Multi-dual numbers: real polynomials in nilpotent `e_1, ..., e_n` with
//! `e_i^2 = 0`.
//!
//! Evaluating a smooth `g` at `z + e_1 w_1 + ... + e_n w_n` yields
//! `d^|S| g(z; w_S)` as the coefficient of `prod_{i in S} e_i` for every
//! subset `S`. In particular the top coefficient is the mixed differential
//! `d^n g(z; w_1, ..., w_n)`, exact up to roundoff.
//!
//! Coefficients are indexed by subset bitmask. A coefficient vector of
//! length one is a constant and broadcasts against any slot count.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;
use crate::taylor::Taylor;

/// The arithmetic the analytic test functions and chart maps are written in.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    /// The real part.
    fn value(&self) -> f64;
    /// `h(self)` given `[h(v), h'(v), h''(v), ...]` at `v = self.value()`.
    fn compose(&self, derivatives: &[f64]) -> Self;
    /// Number of derivatives `compose` consumes.
    fn jet_order(&self) -> usize;

    fn scale(&self, s: f64) -> Self {
        self.clone() * Self::from_f64(s)
    }

    fn exp(&self) -> Self {
        let e = math::exp(self.value());
        self.compose(&vec![e; self.jet_order() + 1])
    }

    fn ln(&self) -> Self {
        let a = self.value();
        let n = self.jet_order();
        let mut d = vec![math::ln(a)];
        let mut fact = 1.0;
        for m in 1..=n {
            if m > 1 {
                fact *= (m - 1) as f64;
            }
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            d.push(sign * fact / math::powi(a, m as i32));
        }
        self.compose(&d)
    }

    fn sin(&self) -> Self {
        let (s, c) = (math::sin(self.value()), math::cos(self.value()));
        let cycle = [s, c, -s, -c];
        let d: Vec<f64> = (0..=self.jet_order()).map(|m| cycle[m % 4]).collect();
        self.compose(&d)
    }

    fn cos(&self) -> Self {
        let (s, c) = (math::sin(self.value()), math::cos(self.value()));
        let cycle = [c, -s, -c, s];
        let d: Vec<f64> = (0..=self.jet_order()).map(|m| cycle[m % 4]).collect();
        self.compose(&d)
    }

    fn sqrt(&self) -> Self {
        let a = self.value();
        let mut d = Vec::with_capacity(self.jet_order() + 1);
        let mut c = 1.0;
        let mut expo = 0.5;
        let root = math::sqrt(a);
        let mut p = root;
        for _ in 0..=self.jet_order() {
            d.push(c * p);
            c *= expo;
            expo -= 1.0;
            p /= a;
        }
        self.compose(&d)
    }

    fn atan(&self) -> Self {
        let n = self.jet_order();
        let a = self.value();
        // atan' = 1 / (1 + x^2); integrate the series term by term.
        let x = Taylor::affine(a, 1.0, n);
        let deriv = x.mul(&x).add_scalar(1.0).recip();
        let mut coeffs = vec![math::atan(a)];
        for k in 0..n {
            coeffs.push(deriv.coeffs[k] / (k + 1) as f64);
        }
        self.compose(&Taylor { coeffs }.derivatives())
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::from_f64(1.0);
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn compose(&self, derivatives: &[f64]) -> Self {
        derivatives[0]
    }
    fn jet_order(&self) -> usize {
        0
    }
    fn exp(&self) -> Self {
        math::exp(*self)
    }
    fn ln(&self) -> Self {
        math::ln(*self)
    }
    fn sin(&self) -> Self {
        math::sin(*self)
    }
    fn cos(&self) -> Self {
        math::cos(*self)
    }
    fn sqrt(&self) -> Self {
        math::sqrt(*self)
    }
    fn atan(&self) -> Self {
        math::atan(*self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiDual {
    coeffs: Vec<f64>,
}

impl MultiDual {
    pub fn constant(v: f64) -> Self {
        Self { coeffs: vec![v] }
    }

    pub fn zero(slots: usize) -> Self {
        Self {
            coeffs: vec![0.0; 1 << slots],
        }
    }

    /// `value + sum_i e_i directions[i]`.
    pub fn variable(value: f64, directions: &[f64]) -> Self {
        let mut out = Self::zero(directions.len());
        out.coeffs[0] = value;
        for (i, d) in directions.iter().enumerate() {
            out.coeffs[1 << i] = *d;
        }
        out
    }

    /// Seed a point `z` with tangent tuple `w`: component `c` becomes
    /// `z[c] + sum_i e_i w_i[c]`.
    pub fn seed(point: &[f64], tuple: &[&[f64]]) -> Vec<Self> {
        (0..point.len())
            .map(|c| {
                let dirs: Vec<f64> = tuple.iter().map(|w| w[c]).collect();
                Self::variable(point[c], &dirs)
            })
            .collect()
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        debug_assert!(coeffs.len().is_power_of_two());
        Self { coeffs }
    }

    pub fn slots(&self) -> usize {
        self.coeffs.len().trailing_zeros() as usize
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs.get(mask).copied().unwrap_or(0.0)
    }

    /// Coefficient of `e_1 ... e_n` for `n = self.slots()`. A broadcast
    /// constant has no slots; use [`MultiDual::coeff`] with the full mask
    /// when the slot count is known.
    pub fn top(&self) -> f64 {
        self.coeffs[self.coeffs.len() - 1]
    }

    fn broadcast(self, len: usize) -> Self {
        if self.coeffs.len() == len {
            self
        } else {
            let mut out = vec![0.0; len];
            out[0] = self.coeffs[0];
            Self { coeffs: out }
        }
    }

    fn zip_with(self, rhs: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let a = self.broadcast(len);
        let b = rhs.broadcast(len);
        Self {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| f(*x, *y)).collect(),
        }
    }

    pub fn recip(&self) -> Self {
        let a = self.coeffs[0];
        let n = self.slots();
        let mut d = Vec::with_capacity(n + 1);
        let mut fact = 1.0;
        for m in 0..=n {
            if m > 0 {
                fact *= m as f64;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            d.push(sign * fact / math::powi(a, m as i32 + 1));
        }
        self.compose(&d)
    }
}

impl Add for MultiDual {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for MultiDual {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for MultiDual {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for MultiDual {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.coeffs.len() == 1 {
            let s = self.coeffs[0];
            return Self {
                coeffs: rhs.coeffs.iter().map(|c| c * s).collect(),
            };
        }
        if rhs.coeffs.len() == 1 {
            let s = rhs.coeffs[0];
            return Self {
                coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            };
        }
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let a = self.broadcast(len);
        let b = rhs.broadcast(len);
        let full = len - 1;
        let mut out = vec![0.0; len];
        for (ma, &ca) in a.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let rest = full & !ma;
            // enumerate submasks of `rest`, including the empty one
            let mut mb = rest;
            loop {
                out[ma | mb] += ca * b.coeffs[mb];
                if mb == 0 {
                    break;
                }
                mb = (mb - 1) & rest;
            }
        }
        Self { coeffs: out }
    }
}

impl Div for MultiDual {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Scalar for MultiDual {
    fn from_f64(v: f64) -> Self {
        Self::constant(v)
    }

    fn value(&self) -> f64 {
        self.coeffs[0]
    }

    fn compose(&self, derivatives: &[f64]) -> Self {
        let n = self.slots();
        let mut delta = self.clone();
        delta.coeffs[0] = 0.0;
        let mut out = Self::zero(n);
        out.coeffs[0] = derivatives[0];
        let mut power = delta.clone();
        let mut fact = 1.0;
        for (m, d) in derivatives.iter().enumerate().take(n + 1).skip(1) {
            fact *= m as f64;
            if *d != 0.0 {
                for (o, p) in out.coeffs.iter_mut().zip(&power.coeffs) {
                    *o += d / fact * p;
                }
            }
            if m < n {
                power = power * delta.clone();
            }
        }
        out
    }

    fn jet_order(&self) -> usize {
        self.slots()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_rule_in_two_slots() {
        // d^2 (x * y) at (2, 3) along (1, 0), (0, 1) is 1
        let x = MultiDual::variable(2.0, &[1.0, 0.0]);
        let y = MultiDual::variable(3.0, &[0.0, 1.0]);
        let p = x * y;
        assert_eq!(p.coeffs(), &[6.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn third_derivative_of_exp() {
        let x = MultiDual::variable(0.5, &[1.0, 1.0, 1.0]);
        assert_relative_eq!(x.exp().top(), math::exp(0.5), epsilon = 1e-15);
    }

    #[test]
    fn elementary_derivatives() {
        let a = 0.7;
        let x = MultiDual::variable(a, &[1.0, 1.0]);
        assert_relative_eq!(x.sin().top(), -math::sin(a), epsilon = 1e-15);
        assert_relative_eq!(x.cos().top(), -math::cos(a), epsilon = 1e-15);
        assert_relative_eq!(x.ln().top(), -1.0 / (a * a), epsilon = 1e-14);
        assert_relative_eq!(x.sqrt().top(), -0.25 * a.powf(-1.5), epsilon = 1e-14);
        assert_relative_eq!(x.recip().top(), 2.0 / (a * a * a), epsilon = 1e-13);
        let atan2 = -2.0 * a / ((1.0 + a * a) * (1.0 + a * a));
        assert_relative_eq!(x.atan().top(), atan2, epsilon = 1e-14);
    }

    #[test]
    fn constants_broadcast() {
        let x = MultiDual::variable(1.0, &[2.0]);
        let y = x.clone() + MultiDual::constant(3.0);
        assert_eq!(y.coeffs(), &[4.0, 2.0]);
        let z = MultiDual::constant(2.0) * x;
        assert_eq!(z.coeffs(), &[2.0, 4.0]);
    }
}
