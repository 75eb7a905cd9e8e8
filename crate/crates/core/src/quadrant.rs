//! Corner extensions: the half-line operator applied axis by axis.
//!
//! The source lives on `(a_1, b_1] x ... x (a_n, b_n] x V` with the corner
//! variables in coordinates `0..n`. Axis `n - 1` is extended first and axis
//! `0` last; each step treats the remaining coordinates as part of `E` and
//! queries the previous step's extension lazily.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::halfline::{extend_along, OperatorConfig};
use crate::jets::{JetFunction, Point, Tangent};
use crate::value::Value;

/// Per-axis operator parameters; all axes share `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrantConfig {
    axes: Vec<OperatorConfig>,
}

impl QuadrantConfig {
    pub fn new(axes: Vec<OperatorConfig>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidConfig("a quadrant needs at least one axis".into()));
        }
        let k = axes[0].k;
        for c in &axes {
            c.validate()?;
            if c.k != k {
                return Err(Error::InvalidConfig("all axes must share k".into()));
            }
        }
        Ok(Self { axes })
    }

    /// `n` axes with the same `(a, tau, b)`.
    pub fn uniform(n: usize, a: f64, tau: f64, b: f64, k: usize) -> Result<Self> {
        let c = OperatorConfig::new(a, tau, b, k)?;
        Self::new(alloc::vec![c; n])
    }

    pub fn n(&self) -> usize {
        self.axes.len()
    }

    pub fn k(&self) -> usize {
        self.axes[0].k
    }

    pub fn axes(&self) -> &[OperatorConfig] {
        &self.axes
    }

    /// A point is in the vanishing region iff some `y_i >= 2 b_i - tau_i`.
    pub fn in_vanishing_region(&self, point: &Point) -> bool {
        self.axes
            .iter()
            .enumerate()
            .any(|(i, c)| point.coord(i) >= c.vanishing_threshold())
    }

    /// Inside the closed corner `(a_1, b_1] x ... x (a_n, b_n]`.
    pub fn in_corner(&self, point: &Point) -> bool {
        self.axes.iter().enumerate().all(|(i, c)| {
            let y = point.coord(i);
            y > c.a && y <= c.b
        })
    }
}

type DynJet<'a> = Box<dyn JetFunction + Send + Sync + 'a>;

/// The composed extension on `cube(a, inf) x V`.
pub struct QuadrantExtension<'a> {
    config: QuadrantConfig,
    inner: DynJet<'a>,
}

impl core::fmt::Debug for QuadrantExtension<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("QuadrantExtension").field("config", &self.config).finish()
    }
}

pub fn extend_quadrant<'a, F>(f: F, config: QuadrantConfig) -> Result<QuadrantExtension<'a>>
where
    F: JetFunction + Send + Sync + 'a,
{
    if config.n() > f.dim() {
        return Err(Error::InvalidConfig(format!(
            "{} corner axes but the source has {} coordinates",
            config.n(),
            f.dim()
        )));
    }
    let mut inner: DynJet<'a> = Box::new(f);
    for (axis, c) in config.axes.iter().enumerate().rev() {
        inner = Box::new(extend_along(inner, *c, axis)?);
    }
    Ok(QuadrantExtension { config, inner })
}

impl QuadrantExtension<'_> {
    pub fn config(&self) -> &QuadrantConfig {
        &self.config
    }
}

/// `d^l F~(point; w)` of the composed extension.
pub fn quadrant_jet(ext: &QuadrantExtension<'_>, point: &Point, w: &[Tangent]) -> Result<Value> {
    ext.jet(point, w)
}

impl JetFunction for QuadrantExtension<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value_dim(&self) -> usize {
        self.inner.value_dim()
    }
    fn order(&self) -> usize {
        self.inner.order()
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        self.inner.jet(point, tuple)
    }
}
