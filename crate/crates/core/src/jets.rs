//! Tangent-tuple algebra on `H[E] = R x E`.
//!
//! Points and tangents are flat coordinate vectors. One coordinate (the
//! *axis*, `0` unless stated otherwise) is the distinguished half-line
//! direction; the rest span `E`. For a tangent `w = (lambda, X)`:
//! `chi(w) = lambda`, the time part is `(lambda, 0)`, the space part is
//! `(0, X)`, and the unit is `1 = (1, 0)`.

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::value::{self, Value};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tangent(pub Vec<f64>);

impl Point {
    /// `(t, x)` with `t` in coordinate `0`.
    pub fn new(t: f64, x: &[f64]) -> Self {
        let mut c = Vec::with_capacity(x.len() + 1);
        c.push(t);
        c.extend_from_slice(x);
        Self(c)
    }

    pub fn from_coords(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn t(&self) -> f64 {
        self.0[0]
    }

    pub fn x(&self) -> &[f64] {
        &self.0[1..]
    }

    pub fn coord(&self, axis: usize) -> f64 {
        self.0[axis]
    }

    /// The same point with coordinate `axis` replaced by `value`.
    pub fn with_coord(&self, axis: usize, value: f64) -> Self {
        let mut c = self.0.clone();
        c[axis] = value;
        Self(c)
    }

    /// `self + s * direction`.
    pub fn shifted(&self, direction: &Tangent, s: f64) -> Self {
        Self(
            self.0
                .iter()
                .zip(&direction.0)
                .map(|(p, d)| p + s * d)
                .collect(),
        )
    }
}

impl Tangent {
    /// `(lambda, X)` with `lambda` in coordinate `0`.
    pub fn new(lambda: f64, space: &[f64]) -> Self {
        let mut c = Vec::with_capacity(space.len() + 1);
        c.push(lambda);
        c.extend_from_slice(space);
        Self(c)
    }

    pub fn from_coords(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The unit vector `1` along `axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut c = alloc::vec![0.0; dim];
        c[axis] = 1.0;
        Self(c)
    }

    /// `chi(w)`: the component along `axis`.
    pub fn lambda(&self, axis: usize) -> f64 {
        self.0[axis]
    }

    /// `v(w)`: the tangent with its `axis` component zeroed.
    pub fn space_part(&self, axis: usize) -> Self {
        let mut c = self.0.clone();
        c[axis] = 0.0;
        Self(c)
    }

    /// The tangent with everything but the `axis` component zeroed.
    pub fn time_part(&self, axis: usize) -> Self {
        let mut c = alloc::vec![0.0; self.0.len()];
        c[axis] = self.0[axis];
        Self(c)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|v| v * s).collect())
    }
}

/// A function whose differentials `d^l f(z; w_1, ..., w_l)` (continuously
/// extended to the closed boundary piece of its domain) can be evaluated.
///
/// `jet(point, tuple)` returns the differential of order `tuple.len()`,
/// which must be symmetric and multilinear in the tuple.
pub trait JetFunction {
    /// Number of coordinates of a point.
    fn dim(&self) -> usize;
    /// Dimension of the value space `F`.
    fn value_dim(&self) -> usize;
    /// Highest order `k` with a jet.
    fn order(&self) -> usize;
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value>;
}

impl<T: JetFunction + ?Sized> JetFunction for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value_dim(&self) -> usize {
        (**self).value_dim()
    }
    fn order(&self) -> usize {
        (**self).order()
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        (**self).jet(point, tuple)
    }
}

impl<T: JetFunction + ?Sized> JetFunction for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value_dim(&self) -> usize {
        (**self).value_dim()
    }
    fn order(&self) -> usize {
        (**self).order()
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        (**self).jet(point, tuple)
    }
}

impl<T: JetFunction + ?Sized> JetFunction for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value_dim(&self) -> usize {
        (**self).value_dim()
    }
    fn order(&self) -> usize {
        (**self).order()
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        (**self).jet(point, tuple)
    }
}

/// Validate dimensions and order of a jet query against `f`.
pub fn check_query<F: JetFunction + ?Sized>(f: &F, point: &Point, tuple: &[Tangent]) -> Result<()> {
    if point.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: point.dim(),
        });
    }
    if tuple.len() > f.order() {
        return Err(Error::OrderTooHigh {
            requested: tuple.len(),
            max: f.order(),
        });
    }
    if let Some(w) = tuple.iter().find(|w| w.dim() != f.dim()) {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: w.dim(),
        });
    }
    Ok(())
}

/// One element of `I_{l,p}`: the slots `z` taking time parts and the
/// slots `o` taking space parts. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSplit {
    pub ell: usize,
    pub z: Vec<usize>,
    pub o: Vec<usize>,
}

impl IndexSplit {
    pub fn p(&self) -> usize {
        self.z.len()
    }
}

/// All `binomial(ell, p)` splits, ordered lexicographically in `z`.
pub fn enumerate_splits(ell: usize, p: usize) -> Result<Vec<IndexSplit>> {
    if p > ell {
        return Err(Error::InvalidSplit { ell, p });
    }
    let mut out = Vec::new();
    let mut z: Vec<usize> = (1..=p).collect();
    loop {
        let o = (1..=ell).filter(|i| !z.contains(i)).collect();
        out.push(IndexSplit { ell, z: z.clone(), o });
        // advance to the next combination
        let mut i = p;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if z[i] < ell - (p - 1 - i) {
                z[i] += 1;
                for j in i + 1..p {
                    z[j] = z[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `X_{l, z_1..z_p}(w)`: product of the time components at the `z` slots
/// (`1` when `p = 0`), with time measured along coordinate `0`.
pub fn chi_product(split: &IndexSplit, w: &[Tangent]) -> f64 {
    chi_product_on(split, w, 0)
}

pub fn chi_product_on(split: &IndexSplit, w: &[Tangent], axis: usize) -> f64 {
    split.z.iter().map(|&i| w[i - 1].lambda(axis)).product()
}

/// Right-hand side of the split identity
/// `d^l g(z; w) = sum_p sum_{I_{l,p}} X_z(w) d^l g(z; v(w_o), 1_p)`,
/// evaluated with a caller-supplied symmetric multilinear form `form`.
pub fn symmetric_decompose<F>(form: F, w: &[Tangent], axis: usize) -> Result<Value>
where
    F: Fn(&[Tangent]) -> Result<Value>,
{
    let ell = w.len();
    if ell == 0 {
        return form(&[]);
    }
    let dim = w[0].dim();
    let unit = Tangent::unit(dim, axis);
    let mut acc: Option<Value> = None;
    for p in 0..=ell {
        for split in enumerate_splits(ell, p)? {
            let chi = chi_product_on(&split, w, axis);
            let mut args: Vec<Tangent> = split.o.iter().map(|&i| w[i - 1].space_part(axis)).collect();
            args.extend(core::iter::repeat_n(unit.clone(), p));
            let v = form(&args)?;
            let acc = acc.get_or_insert_with(|| value::zeros(v.len()));
            value::axpy(acc, chi, &v);
        }
    }
    Ok(acc.unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn splits_of_two_and_three() {
        let s = enumerate_splits(2, 1).unwrap();
        assert_eq!(
            s,
            vec![
                IndexSplit { ell: 2, z: vec![1], o: vec![2] },
                IndexSplit { ell: 2, z: vec![2], o: vec![1] },
            ]
        );
        let s = enumerate_splits(3, 0).unwrap();
        assert_eq!(s, vec![IndexSplit { ell: 3, z: vec![], o: vec![1, 2, 3] }]);
        assert_eq!(enumerate_splits(3, 1).unwrap().len(), 3);
        assert_eq!(enumerate_splits(0, 0).unwrap().len(), 1);
        assert_eq!(enumerate_splits(2, 3), Err(Error::InvalidSplit { ell: 2, p: 3 }));
    }

    #[test]
    fn chi_products() {
        let w = vec![Tangent::new(2.0, &[1.0]), Tangent::new(3.0, &[0.0])];
        let empty = IndexSplit { ell: 2, z: vec![], o: vec![1, 2] };
        assert_eq!(chi_product(&empty, &w), 1.0);
        let both = IndexSplit { ell: 2, z: vec![1, 2], o: vec![] };
        assert_eq!(chi_product(&both, &w), 6.0);
        let w = vec![Tangent::new(5.0, &[]), Tangent::new(-4.0, &[])];
        let second = IndexSplit { ell: 2, z: vec![2], o: vec![1] };
        assert_eq!(chi_product(&second, &w), -4.0);
    }

    #[test]
    fn decompose_linear_form() {
        // g(lambda, X) = 3 lambda + 2 X
        let form = |args: &[Tangent]| Ok(vec![3.0 * args[0].0[0] + 2.0 * args[0].0[1]]);
        let w = [Tangent::new(1.5, &[-2.0])];
        let direct = form(&w).unwrap();
        let split = symmetric_decompose(form, &w, 0).unwrap();
        assert_eq!(direct, split);
    }

    #[test]
    fn decompose_with_zero_times_is_space_only() {
        let form = |args: &[Tangent]| {
            Ok(vec![args.iter().map(|a| a.0[0] + 2.0 * a.0[1]).product::<f64>()])
        };
        let w = [Tangent::new(0.0, &[1.0]), Tangent::new(0.0, &[3.0])];
        assert_eq!(symmetric_decompose(form, &w, 0).unwrap(), vec![12.0]);
    }
}
