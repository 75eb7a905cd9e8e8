//! Jet oracles: closed-form functions, linear combinations, and pullbacks
//! of jet functions along smooth maps.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::Norm;
use crate::jets::{check_query, JetFunction, Point, Tangent};
use crate::multidual::{MultiDual, Scalar};
use crate::value::{self, Value};

/// Where a jet oracle may be queried.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Whole,
    /// `lo[c] < z[c] <= hi[c]` for every coordinate (infinite bounds allowed).
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// `norm(z[..dims]) <= radius`, up to a relative slack of `1e-12`.
    Ball { radius: f64, dims: usize, norm: Norm },
}

impl Domain {
    /// `(-inf, b] x E` with `t` in coordinate `0`.
    pub fn half_space(b: f64) -> Self {
        Self::time_interval(f64::NEG_INFINITY, b)
    }

    /// `(a, b] x E` with `t` in coordinate `0`.
    pub fn time_interval(a: f64, b: f64) -> Self {
        Domain::Box {
            lo: vec![a],
            hi: vec![b],
        }
    }

    pub fn unit_ball(dims: usize) -> Self {
        Domain::Ball {
            radius: 1.0,
            dims,
            norm: Norm::euclidean(dims),
        }
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        match self {
            Domain::Whole => true,
            Domain::Box { lo, hi } => z
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| v > l && v <= h),
            Domain::Ball { radius, dims, norm } => {
                norm.eval(&z[..*dims]) <= radius * (1.0 + 1e-12)
            }
        }
    }
}

/// A closed-form map written once over any [`Scalar`].
pub trait Analytic {
    fn dim(&self) -> usize;
    fn value_dim(&self) -> usize;
    fn eval<S: Scalar>(&self, z: &[S]) -> Vec<S>;
}

/// Jets of an [`Analytic`] map by multi-dual evaluation.
#[derive(Debug, Clone)]
pub struct AnalyticSource<A> {
    pub function: A,
    pub domain: Domain,
    pub order: usize,
}

impl<A: Analytic> AnalyticSource<A> {
    pub fn new(function: A, domain: Domain, order: usize) -> Self {
        Self {
            function,
            domain,
            order,
        }
    }
}

/// `d^l g(z; w)` for a closed-form `g`.
pub fn analytic_jet<A: Analytic>(g: &A, z: &[f64], tuple: &[Tangent]) -> Value {
    if tuple.is_empty() {
        return g.eval(z);
    }
    let dirs: Vec<&[f64]> = tuple.iter().map(|w| w.coords()).collect();
    let full = (1 << tuple.len()) - 1;
    g.eval(&MultiDual::seed(z, &dirs))
        .iter()
        .map(|v| v.coeff(full))
        .collect()
}

impl<A: Analytic> JetFunction for AnalyticSource<A> {
    fn dim(&self) -> usize {
        self.function.dim()
    }
    fn value_dim(&self) -> usize {
        self.function.value_dim()
    }
    fn order(&self) -> usize {
        self.order
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        check_query(self, point, tuple)?;
        if !self.domain.contains(point.coords()) {
            return Err(Error::OutsideDomain {
                point: point.0.clone(),
            });
        }
        Ok(analytic_jet(&self.function, point.coords(), tuple))
    }
}

/// `alpha f + beta g`.
#[derive(Debug, Clone)]
pub struct LinearCombination<F, G> {
    pub alpha: f64,
    pub f: F,
    pub beta: f64,
    pub g: G,
}

impl<F: JetFunction, G: JetFunction> JetFunction for LinearCombination<F, G> {
    fn dim(&self) -> usize {
        self.f.dim()
    }
    fn value_dim(&self) -> usize {
        self.f.value_dim()
    }
    fn order(&self) -> usize {
        self.f.order().min(self.g.order())
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        let mut out = self.f.jet(point, tuple)?;
        value::scale(&mut out, self.alpha);
        value::axpy(&mut out, self.beta, &self.g.jet(point, tuple)?);
        Ok(out)
    }
}

/// A smooth map between coordinate spaces, written over any [`Scalar`].
pub trait SmoothMap {
    fn in_dim(&self) -> usize;
    fn out_dim(&self) -> usize;
    fn map<S: Scalar>(&self, z: &[S]) -> Vec<S>;
}

/// A linear map `z -> A z` given by its rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub rows: Vec<Vec<f64>>,
}

impl LinearMap {
    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        self.map(z)
    }
}

impl SmoothMap for LinearMap {
    fn in_dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
    fn out_dim(&self) -> usize {
        self.rows.len()
    }
    fn map<S: Scalar>(&self, z: &[S]) -> Vec<S> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(z)
                    .filter(|(a, _)| **a != 0.0)
                    .fold(S::from_f64(0.0), |acc, (a, v)| acc + v.scale(*a))
            })
            .collect()
    }
}

/// All set partitions of the slot set `mask`, each as a list of block masks.
pub fn set_partitions(mask: usize) -> Vec<Vec<usize>> {
    if mask == 0 {
        return vec![Vec::new()];
    }
    let low = mask & mask.wrapping_neg();
    let rest = mask ^ low;
    let mut out = Vec::new();
    let mut sub = rest;
    loop {
        let block = low | sub;
        for mut tail in set_partitions(rest ^ sub) {
            tail.insert(0, block);
            out.push(tail);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

fn block_tangent(inner: &[MultiDual], block: usize) -> Tangent {
    Tangent(inner.iter().map(|c| c.coeff(block)).collect())
}

/// Coefficient of `e_S` in `f(inner)`, by the multivariate chain rule
/// `sum_{partitions P of S} d^|P| f(inner_0; (inner_B)_{B in P})`.
pub fn compose_coefficient<F: JetFunction + ?Sized>(
    f: &F,
    base: &Point,
    inner: &[MultiDual],
    mask: usize,
) -> Result<Value> {
    let mut acc = value::zeros(f.value_dim());
    for partition in set_partitions(mask) {
        let tuple: Vec<Tangent> = partition.iter().map(|&b| block_tangent(inner, b)).collect();
        if tuple.iter().any(|t| t.0.iter().all(|v| *v == 0.0)) {
            continue;
        }
        value::axpy(&mut acc, 1.0, &f.jet(base, &tuple)?);
    }
    Ok(acc)
}

/// `f(inner)` as multi-dual values, all subset coefficients filled in.
pub fn compose_full<F: JetFunction + ?Sized>(f: &F, inner: &[MultiDual]) -> Result<Vec<MultiDual>> {
    let slots = inner.iter().map(MultiDual::slots).max().unwrap_or(0);
    let base = Point(inner.iter().map(|c| c.value()).collect());
    let n = 1usize << slots;
    let mut coeffs = vec![vec![0.0; n]; f.value_dim()];
    for mask in 0..n {
        let v = compose_coefficient(f, &base, inner, mask)?;
        for (c, x) in coeffs.iter_mut().zip(v) {
            c[mask] = x;
        }
    }
    Ok(coeffs.into_iter().map(MultiDual::from_coeffs).collect())
}

/// `f o map`, with jets by the chain rule.
#[derive(Debug, Clone)]
pub struct Pullback<F, M> {
    pub f: F,
    pub map: M,
    pub order: usize,
}

impl<F: JetFunction, M: SmoothMap> Pullback<F, M> {
    pub fn new(f: F, map: M) -> Self {
        let order = f.order();
        Self { f, map, order }
    }
}

impl<F: JetFunction, M: SmoothMap> JetFunction for Pullback<F, M> {
    fn dim(&self) -> usize {
        self.map.in_dim()
    }
    fn value_dim(&self) -> usize {
        self.f.value_dim()
    }
    fn order(&self) -> usize {
        self.order
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        check_query(self, point, tuple)?;
        if tuple.is_empty() {
            return self.f.jet(&Point(self.map.map(point.coords())), &[]);
        }
        let dirs: Vec<&[f64]> = tuple.iter().map(|w| w.coords()).collect();
        let inner = self.map.map(&MultiDual::seed(point.coords(), &dirs));
        let base = Point(inner.iter().map(|c| c.value()).collect());
        compose_coefficient(&self.f, &base, &inner, (1 << tuple.len()) - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfns::TestFunction;
    use approx::assert_relative_eq;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..5).map(|n| set_partitions((1 << n) - 1).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15]);
    }

    #[test]
    fn analytic_source_rejects_outside_points() {
        let f = AnalyticSource::new(TestFunction::ExpCos, Domain::half_space(0.0), 2);
        assert!(f.jet(&Point::new(0.0, &[0.3]), &[]).is_ok());
        assert!(matches!(
            f.jet(&Point::new(0.1, &[0.3]), &[]),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(matches!(
            f.jet(&Point::new(-0.1, &[0.3]), &vec![Tangent::new(1.0, &[0.0]); 3]),
            Err(Error::OrderTooHigh { .. })
        ));
    }

    #[test]
    fn pullback_chain_rule() {
        // g(s) = exp(2 s) through the map s -> (2 s, 0)
        let f = AnalyticSource::new(TestFunction::ExpCos, Domain::Whole, 4);
        let map = LinearMap {
            rows: vec![vec![2.0], vec![0.0]],
        };
        let g = Pullback::new(f, map);
        let w = vec![Tangent(vec![1.0]); 3];
        let v = g.jet(&Point(vec![0.25]), &w).unwrap();
        assert_relative_eq!(v[0], 8.0 * libm::exp(0.5), epsilon = 1e-13);
    }

    #[test]
    fn compose_full_matches_direct_multidual() {
        let f = AnalyticSource::new(TestFunction::ExpCos, Domain::Whole, 3);
        let inner = vec![
            MultiDual::variable(0.1, &[1.0, 0.5]),
            MultiDual::variable(0.2, &[-1.0, 2.0]),
        ];
        let composed = compose_full(&f, &inner).unwrap();
        let direct = TestFunction::ExpCos.eval(&inner);
        for (a, b) in composed[0].coeffs().iter().zip(direct[0].coeffs()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-14);
        }
    }
}
