//! Finite-difference oracles with Richardson extrapolation. These see only
//! values (or lower-order jets) of the function under test, never its
//! closed form.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::jets::{JetFunction, Point, Tangent};
use crate::math;
use crate::value::{self, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Symmetric stencil `z +- h/2 w_i`, error in even powers of `h`.
    Central,
    /// Stencil `z + h sum_{i in S} w_i`, error in all powers of `h`.
    Forward,
}

/// A derivative value with an estimate of its error.
#[derive(Debug, Clone, PartialEq)]
pub struct FdEstimate {
    pub value: Value,
    pub error: f64,
}

/// Iterated directional differences of order `<= 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdJetOracle {
    /// Base step per order (index `0` unused).
    pub steps: [f64; 5],
    /// Step halvings in the Richardson table.
    pub levels: usize,
    pub scheme: Scheme,
}

pub const FD_MAX_ORDER: usize = 4;

impl FdJetOracle {
    pub fn central() -> Self {
        Self {
            steps: [0.0, 1e-3, 5e-3, 1e-2, 2e-2],
            levels: 3,
            scheme: Scheme::Central,
        }
    }

    pub fn forward() -> Self {
        Self {
            steps: [0.0, 2e-3, 5e-3, 1e-2, 2e-2],
            levels: 4,
            scheme: Scheme::Forward,
        }
    }

    pub fn with_step(mut self, order: usize, h: f64) -> Self {
        self.steps[order] = h;
        self
    }

    pub fn with_levels(mut self, levels: usize) -> Self {
        self.levels = levels.max(1);
        self
    }

    fn difference<G>(&self, fun: &G, point: &Point, tuple: &[Tangent], h: f64) -> Result<(Value, f64)>
    where
        G: Fn(&Point) -> Result<Value>,
    {
        let ell = tuple.len();
        let mut acc: Option<Value> = None;
        let mut biggest: f64 = 0.0;
        for mask in 0usize..(1 << ell) {
            let mut z = point.clone();
            let mut sign = 1.0;
            for (i, w) in tuple.iter().enumerate() {
                let inside = mask & (1 << i) != 0;
                let (s, weight) = match (self.scheme, inside) {
                    (Scheme::Central, true) => (0.5 * h, 1.0),
                    (Scheme::Central, false) => (-0.5 * h, -1.0),
                    (Scheme::Forward, true) => (h, 1.0),
                    (Scheme::Forward, false) => (0.0, -1.0),
                };
                sign *= weight;
                if s != 0.0 {
                    z = z.shifted(w, s);
                }
            }
            let v = fun(&z).map_err(|e| match e {
                Error::OutsideDomain { .. } => Error::StencilOutsideDomain,
                other => other,
            })?;
            biggest = biggest.max(value::max_abs(&v));
            let acc = acc.get_or_insert_with(|| value::zeros(v.len()));
            value::axpy(acc, sign, &v);
        }
        let mut out = acc.unwrap_or_default();
        value::scale(&mut out, 1.0 / math::powi(h, ell as i32));
        let roundoff = 4.0 * f64::EPSILON * biggest * (1u64 << ell) as f64 / math::powi(h, ell as i32);
        Ok((out, roundoff))
    }

    /// `d^l fun(point; tuple)` with `l = tuple.len() <= 4`.
    pub fn jet<G>(&self, fun: G, point: &Point, tuple: &[Tangent]) -> Result<FdEstimate>
    where
        G: Fn(&Point) -> Result<Value>,
    {
        let ell = tuple.len();
        if ell > FD_MAX_ORDER {
            return Err(Error::OrderTooHigh {
                requested: ell,
                max: FD_MAX_ORDER,
            });
        }
        if ell == 0 {
            return Ok(FdEstimate {
                value: fun(point)?,
                error: 0.0,
            });
        }
        let mut rows = Vec::with_capacity(self.levels);
        let mut roundoff: f64 = 0.0;
        for m in 0..self.levels {
            let h = self.steps[ell] / (1u64 << m) as f64;
            let (v, r) = self.difference(&fun, point, tuple, h)?;
            rows.push(v);
            roundoff = roundoff.max(r);
        }
        let step = match self.scheme {
            Scheme::Central => 2,
            Scheme::Forward => 1,
        };
        let (value, err) = richardson(&rows, 2.0, |m| step * m as i32, false);
        Ok(FdEstimate {
            value,
            error: err + 4.0 * roundoff,
        })
    }
}

/// `d^l fun(point; tuple)` by central differences with default steps.
pub fn fd_jet<G>(fun: G, point: &Point, tuple: &[Tangent]) -> Result<FdEstimate>
where
    G: Fn(&Point) -> Result<Value>,
{
    FdJetOracle::central().jet(fun, point, tuple)
}

/// Richardson table over samples at `h / ratio^m`, where the `m`-th column
/// removes the error term `h^{power(m)}`. Returns the last diagonal entry,
/// or with `best` the diagonal entry with the smallest successive change,
/// together with that change as the error estimate.
pub fn richardson(rows: &[Value], ratio: f64, power: impl Fn(usize) -> i32, best: bool) -> (Value, f64) {
    let n = rows.len();
    let mut prev: Vec<Value> = rows.to_vec();
    let mut diag: Vec<Value> = vec![rows[0].clone()];
    for m in 1..n {
        let factor = math::powi(ratio, power(m)) - 1.0;
        let mut next = Vec::with_capacity(n - m);
        for i in m..n {
            let hi = &prev[i - m + 1];
            let lo = &prev[i - m];
            next.push(hi.iter().zip(lo).map(|(a, b)| a + (a - b) / factor).collect::<Value>());
        }
        diag.push(next[0].clone());
        prev = next;
    }
    // diag[m] uses samples 0..=m; the estimate of its error is the change
    // from diag[m - 1]
    if n == 1 {
        return (diag.pop().unwrap_or_default(), f64::INFINITY);
    }
    let errs: Vec<f64> = (1..n).map(|m| value::max_abs_diff(&diag[m], &diag[m - 1])).collect();
    let pick = if best {
        (1..n)
            .min_by(|a, b| errs[a - 1].total_cmp(&errs[b - 1]))
            .unwrap_or(n - 1)
    } else {
        n - 1
    };
    (diag[pick].clone(), errs[pick - 1])
}

/// `lim_{h -> 0+} g(h)` from samples at `h = 2^-r`, `r = r0..=r1`.
pub fn one_sided_limit<G>(g: G, r0: u32, r1: u32) -> Result<FdEstimate>
where
    G: Fn(f64) -> Result<Value>,
{
    let rows = (r0..=r1)
        .map(|r| g(math::powi(2.0, -(r as i32))))
        .collect::<Result<Vec<_>>>()?;
    let (value, error) = richardson(&rows, 2.0, |m| m as i32, true);
    Ok(FdEstimate { value, error })
}

/// Forward difference of the `(l-1)`-jet along the last tangent, from the
/// side that `w_l` points into:
/// `lim_{h -> 0+} (d^{l-1} f(z + h w_l; w_1..w_{l-1}) - d^{l-1} f(z; ...)) / h`.
///
/// Used at a boundary point `z`, the one-sided derivative of the lower jet
/// reaches much higher accuracy than iterated value differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetLadder {
    pub h0: f64,
    pub levels: usize,
}

impl Default for JetLadder {
    fn default() -> Self {
        Self { h0: 5e-3, levels: 6 }
    }
}

impl JetLadder {
    pub fn derivative<F: JetFunction + ?Sized>(&self, f: &F, point: &Point, tuple: &[Tangent]) -> Result<FdEstimate> {
        let (last, lower) = match tuple.split_last() {
            Some(x) => x,
            None => {
                return Ok(FdEstimate {
                    value: f.jet(point, &[])?,
                    error: 0.0,
                })
            }
        };
        let base = f.jet(point, lower)?;
        let mut rows = Vec::with_capacity(self.levels);
        let mut roundoff: f64 = 0.0;
        for m in 0..self.levels {
            let h = self.h0 / (1u64 << m) as f64;
            let v = f.jet(&point.shifted(last, h), lower)?;
            roundoff = roundoff.max(4.0 * f64::EPSILON * value::max_abs(&v).max(value::max_abs(&base)) / h);
            rows.push(v.iter().zip(&base).map(|(a, b)| (a - b) / h).collect::<Value>());
        }
        let (value, error) = richardson(&rows, 2.0, |m| m as i32, false);
        Ok(FdEstimate {
            value,
            error: error + roundoff,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{AnalyticSource, Domain};
    use crate::testfns::TestFunction;
    use alloc::vec;

    fn scalar(g: impl Fn(f64) -> f64) -> impl Fn(&Point) -> Result<Value> {
        move |p: &Point| Ok(vec![g(p.t())])
    }

    #[test]
    fn constants_have_zero_derivatives() {
        for ell in 1..=4 {
            let w = vec![Tangent(vec![1.0]); ell];
            let e = fd_jet(scalar(|_| 3.0), &Point(vec![0.2]), &w).unwrap();
            assert!(e.value[0].abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_second_derivative() {
        let w = vec![Tangent(vec![1.0]); 2];
        let e = fd_jet(scalar(|t| t * t), &Point(vec![0.7]), &w).unwrap();
        assert!((e.value[0] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn exp_third_derivative() {
        let w = vec![Tangent(vec![1.0]); 3];
        let e = fd_jet(scalar(math::exp), &Point(vec![0.0]), &w).unwrap();
        assert!((e.value[0] - 1.0).abs() < 1e-6);
        assert!((e.value[0] - 1.0).abs() <= e.error);
        let e = FdJetOracle::forward().jet(scalar(math::exp), &Point(vec![0.0]), &w).unwrap();
        assert!((e.value[0] - 1.0).abs() < 1e-6, "{:?}", e);
    }

    #[test]
    fn stencil_outside_domain() {
        let f = AnalyticSource::new(TestFunction::Exp { dim: 1 }, Domain::half_space(0.0), 2);
        let w = [Tangent(vec![1.0])];
        let r = fd_jet(|p: &Point| f.jet(p, &[]), &Point(vec![0.0]), &w);
        assert_eq!(r, Err(Error::StencilOutsideDomain));
        assert!(fd_jet(scalar(math::exp), &Point(vec![0.0]), &vec![Tangent(vec![1.0]); 5]).is_err());
    }

    #[test]
    fn limits_and_ladder() {
        let lim = one_sided_limit(|h| Ok(vec![math::exp(h) * (1.0 + h)]), 5, 20).unwrap();
        assert!((lim.value[0] - 1.0).abs() < 1e-12);
        let f = AnalyticSource::new(TestFunction::Exp { dim: 1 }, Domain::Whole, 3);
        let w = vec![Tangent(vec![1.0]); 3];
        let d = JetLadder::default().derivative(&f, &Point(vec![0.0]), &w).unwrap();
        assert!((d.value[0] - 1.0).abs() < 1e-9, "{:?}", d);
    }
}
