//! Extensions across spheres: the unit ball under a homogeneous norm, the
//! polar route on the disk, class-constant sources and cone charts.
//!
//! All radial constructions work in `u = xi - 1` with the 1-D operator
//! parameters `a = -1`, `tau_hat`, `upsilon_hat`, `b = 0`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::coeffs::{compute_coefficients, SeeleyCoefficients};
use crate::error::{Error, Result};
use crate::halfline::{extend_along, truncation_index, ExtendedFunction, OperatorConfig};
use crate::jets::{check_query, JetFunction, Point, Tangent};
use crate::math;
use crate::multidual::{MultiDual, Scalar};
use crate::smoothstep::SmoothStep;
use crate::source::{compose_full, Pullback, SmoothMap};
use crate::value::{self, CompensatedSum, Value};

/// `xi(Z) = sqrt(sum_i w_i Z_i^2)`, positive weights.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Norm {
    weights: Vec<f64>,
}

impl Norm {
    pub fn euclidean(dims: usize) -> Self {
        Self { weights: vec![1.0; dims] }
    }

    pub fn weighted(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidConfig("norm weights must be positive and finite".into()));
        }
        Ok(Self { weights })
    }

    pub fn dims(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.eval_scalar(z)
    }

    pub fn eval_scalar<S: Scalar>(&self, z: &[S]) -> S {
        self.weights
            .iter()
            .zip(z)
            .fold(S::from_f64(0.0), |acc, (w, v)| acc + (v.clone() * v.clone()).scale(*w))
            .sqrt()
    }

    /// Largest `|xi(lambda Z) - lambda xi(Z)| / max(1, lambda xi(Z))` over the
    /// samples, and whether `xi` vanishes only at the origin on them.
    pub fn homogeneity_defect(&self, samples: &[(f64, Vec<f64>)]) -> f64 {
        samples
            .iter()
            .map(|(lambda, z)| {
                let scaled: Vec<f64> = z.iter().map(|v| lambda * v).collect();
                let lhs = self.eval(&scaled);
                let rhs = lambda * self.eval(z);
                let zero_mismatch = (lhs == 0.0) != scaled.iter().all(|v| *v == 0.0);
                if zero_mismatch {
                    f64::INFINITY
                } else {
                    (lhs - rhs).abs() / rhs.abs().max(1.0)
                }
            })
            .fold(0.0, f64::max)
    }
}

/// The unit ball of `xi` in the first `dims` coordinates, together with the
/// radial operator parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDomain {
    pub dims: usize,
    pub norm: Norm,
    pub config: OperatorConfig,
}

impl RadialDomain {
    /// Euclidean ball with `-1 < tau_hat < upsilon_hat < 0`.
    pub fn new(dims: usize, tau_hat: f64, upsilon_hat: f64, k: usize) -> Result<Self> {
        Self::with_norm(Norm::euclidean(dims), tau_hat, upsilon_hat, k)
    }

    pub fn with_norm(norm: Norm, tau_hat: f64, upsilon_hat: f64, k: usize) -> Result<Self> {
        if !(-1.0 < tau_hat && tau_hat < upsilon_hat && upsilon_hat < 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need -1 < tau_hat < upsilon_hat < 0, got {tau_hat}, {upsilon_hat}"
            )));
        }
        let config = OperatorConfig::new(-1.0, tau_hat, 0.0, k)?.with_upsilon(upsilon_hat)?;
        Ok(Self {
            dims: norm.dims(),
            norm,
            config,
        })
    }

    pub fn tau_hat(&self) -> f64 {
        self.config.tau
    }

    pub fn upsilon_hat(&self) -> f64 {
        self.config.upsilon
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    /// The extension vanishes for `xi >= 1 + |tau_hat|`.
    pub fn vanishing_radius(&self) -> f64 {
        1.0 + self.config.tau.abs()
    }
}

/// `sum_j c_j rho(-2^j u) rho_hat(-2^j u) f((1 - 2^j u) W / xi(W), x)` for
/// `xi(W) = 1 + u > 1`; `f` itself on the closed ball.
#[derive(Debug, Clone)]
pub struct ExtendedBall<F> {
    source: F,
    domain: RadialDomain,
    coeffs: SeeleyCoefficients,
    cutoff: SmoothStep,
    reduction: SmoothStep,
}

pub fn extend_ball<F: JetFunction>(f: F, domain: RadialDomain) -> Result<ExtendedBall<F>> {
    if f.dim() < domain.dims {
        return Err(Error::DimensionMismatch {
            expected: domain.dims,
            got: f.dim(),
        });
    }
    if f.order() < domain.k() {
        return Err(Error::InvalidConfig(format!(
            "source provides jets up to order {} but k = {}",
            f.order(),
            domain.k()
        )));
    }
    let c = domain.config;
    Ok(ExtendedBall {
        cutoff: SmoothStep::new(c.tau, c.upsilon)?,
        reduction: SmoothStep::new(c.kappa, c.kappa_prime)?,
        coeffs: compute_coefficients(c.k),
        source: f,
        domain,
    })
}

impl<F: JetFunction> ExtendedBall<F> {
    pub fn domain(&self) -> &RadialDomain {
        &self.domain
    }

    pub fn source(&self) -> &F {
        &self.source
    }
}

impl<F: JetFunction> JetFunction for ExtendedBall<F> {
    fn dim(&self) -> usize {
        self.source.dim()
    }
    fn value_dim(&self) -> usize {
        self.source.value_dim()
    }
    fn order(&self) -> usize {
        self.domain.k()
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        check_query(self, point, tuple)?;
        let p = self.domain.dims;
        let xi = self.domain.norm.eval(&point.coords()[..p]);
        if xi <= 1.0 {
            return self.source.jet(point, tuple);
        }
        let tau = self.domain.config.tau;
        let terms = truncation_index(xi - 1.0, tau).min(self.coeffs.count());
        let mut acc = CompensatedSum::new(self.value_dim());
        if terms == 0 {
            return Ok(acc.finish());
        }
        let ell = tuple.len();
        let dirs: Vec<&[f64]> = tuple.iter().map(|w| w.coords()).collect();
        let z = MultiDual::seed(point.coords(), &dirs);
        let s = self.domain.norm.eval_scalar(&z[..p]);
        let u = s.clone() - MultiDual::constant(1.0);
        for (j, weight) in self.coeffs.shadow().iter().enumerate().take(terms) {
            let du = u.scale(-math::powi(2.0, j as i32));
            if du.value() <= tau {
                continue;
            }
            let rho = du.compose(&self.cutoff.eval_jet(du.value(), ell))
                * du.compose(&self.reduction.eval_jet(du.value(), ell));
            let factor = (MultiDual::constant(1.0) + du) / s.clone();
            let inner: Vec<MultiDual> = z
                .iter()
                .enumerate()
                .map(|(c, v)| if c < p { v.clone() * factor.clone() } else { v.clone() })
                .collect();
            let tops: Vec<f64> = compose_full(&self.source, &inner)?
                .into_iter()
                .map(|fy| (rho.clone() * fy).coeff((1 << ell) - 1))
                .collect();
            acc.add_weighted(*weight, &tops);
        }
        Ok(acc.finish())
    }
}

/// How the space coordinates are grouped into classes on which a source is
/// constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassStructure {
    /// Every fiber `{t} x E` is one class.
    SingleClass,
    /// Classes `x + period Z` in coordinate `axis`.
    Periodic { axis: usize, period: f64 },
}

/// Tolerance of the class-constancy check, relative to `max(1, |g|)`.
pub const CLASS_TOLERANCE: f64 = 1e-12;

/// Largest relative value mismatch of `g` between class-equivalent sample
/// points.
pub fn class_discrepancy<F: JetFunction>(g: &F, classes: ClassStructure, samples: &[Point]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, p) in samples.iter().enumerate() {
        let partner = match classes {
            ClassStructure::SingleClass => {
                let other = &samples[(i + 1) % samples.len()];
                let mut c = other.0.clone();
                c[0] = p.t();
                Point(c)
            }
            ClassStructure::Periodic { axis, period } => p.with_coord(axis, p.coord(axis) + period),
        };
        let a = g.jet(p, &[])?;
        let b = g.jet(&partner, &[])?;
        let scale = value::max_abs(&a).max(1.0);
        worst = worst.max(value::max_abs_diff(&a, &b) / scale);
    }
    Ok(worst)
}

/// Check class-constancy of `g` on `samples`, then extend along `t`. The
/// extension is again class-constant.
pub fn extend_partially_constant<F: JetFunction>(
    g: F,
    classes: ClassStructure,
    config: OperatorConfig,
    samples: &[Point],
) -> Result<ExtendedFunction<F>> {
    let discrepancy = class_discrepancy(&g, classes, samples)?;
    if discrepancy > CLASS_TOLERANCE {
        return Err(Error::ClassConstancy { discrepancy });
    }
    extend_along(g, config, 0)
}

/// `(t, x) -> (t cos x, t sin x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarMap;

impl SmoothMap for PolarMap {
    fn in_dim(&self) -> usize {
        2
    }
    fn out_dim(&self) -> usize {
        2
    }
    fn map<S: Scalar>(&self, z: &[S]) -> Vec<S> {
        vec![z[0].clone() * z[1].cos(), z[0].clone() * z[1].sin()]
    }
}

/// `z -> (|z|, angle)` with the angle section in `[0, 2 pi)`. Away from the
/// origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarSection;

/// The section's angle of `(x, y)`.
pub fn section_angle(x: f64, y: f64) -> f64 {
    let a = math::atan2(y, x);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

impl SmoothMap for PolarSection {
    fn in_dim(&self) -> usize {
        2
    }
    fn out_dim(&self) -> usize {
        2
    }
    fn map<S: Scalar>(&self, z: &[S]) -> Vec<S> {
        let (x, y) = (&z[0], &z[1]);
        let theta = section_angle(x.value(), y.value());
        let (c, s) = (math::cos(theta), math::sin(theta));
        // angle = theta + atan(cross / dot) relative to the base direction
        let dot = x.scale(c) + y.scale(s);
        let cross = y.scale(c) - x.scale(s);
        let delta = (cross / dot).atan();
        // pin the value part to the section angle itself
        let delta = delta.clone() - S::from_f64(delta.value());
        let r = (x.clone() * x.clone() + y.clone() * y.clone()).sqrt();
        vec![r, delta + S::from_f64(theta)]
    }
}

/// Disk extension through polar coordinates: `f` on `|z| < r0`, otherwise
/// the radial extension of `f o psi` pushed forward by the section.
#[derive(Debug, Clone)]
pub struct DiskPolarExtension<F: Clone> {
    center: F,
    route: Pullback<ExtendedFunction<Pullback<F, PolarMap>>, PolarSection>,
    r0: f64,
}

pub fn extend_disk_polar<F: JetFunction + Clone>(f: F, domain: &RadialDomain, r0: f64) -> Result<DiskPolarExtension<F>> {
    if domain.dims != 2 || f.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: f.dim(),
        });
    }
    if domain.norm != Norm::euclidean(2) {
        return Err(Error::InvalidConfig("the polar route needs the Euclidean norm".into()));
    }
    let c = &domain.config;
    let config = OperatorConfig::new(r0, 1.0 + c.tau, 1.0, c.k)?.with_upsilon(1.0 + c.upsilon)?;
    let g = Pullback::new(f.clone(), PolarMap);
    let samples: Vec<Point> = (0..16)
        .map(|i| {
            let t = 1.0 - (1.0 - config.tau) * (i as f64) / 16.0;
            Point::new(t, &[0.4 * i as f64])
        })
        .collect();
    let period = ClassStructure::Periodic { axis: 1, period: 2.0 * PI };
    let ext = extend_partially_constant(g, period, config, &samples)?;
    Ok(DiskPolarExtension {
        center: f,
        route: Pullback::new(ext, PolarSection),
        r0,
    })
}

impl<F: JetFunction + Clone> JetFunction for DiskPolarExtension<F> {
    fn dim(&self) -> usize {
        2
    }
    fn value_dim(&self) -> usize {
        self.center.value_dim()
    }
    fn order(&self) -> usize {
        self.route.order()
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        check_query(self, point, tuple)?;
        let c = point.coords();
        if math::sqrt(c[0] * c[0] + c[1] * c[1]) < self.r0 {
            self.center.jet(point, tuple)
        } else {
            self.route.jet(point, tuple)
        }
    }
}

/// The cone chart around a unit vector `Z`: `phi_Z(t, y) = t (sum y_i e_i +
/// sqrt(1 - |y|^2) Z)` with `e_i` an orthonormal basis of `Z^perp`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeChart {
    z: Vec<f64>,
    basis: Vec<Vec<f64>>,
    r: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl ConeChart {
    pub fn new(z: &[f64], r: f64) -> Result<Self> {
        let n = math::sqrt(dot(z, z));
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidConfig("cone axis must be a nonzero vector".into()));
        }
        let z: Vec<f64> = z.iter().map(|v| v / n).collect();
        let p = z.len();
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for i in 0..p {
            let mut e = vec![0.0; p];
            e[i] = 1.0;
            for b in core::iter::once(&z).chain(basis.iter()) {
                let proj = dot(&e, b);
                for (ec, bc) in e.iter_mut().zip(b) {
                    *ec -= proj * bc;
                }
            }
            let len = math::sqrt(dot(&e, &e));
            if len > 1e-8 && basis.len() + 1 < p {
                basis.push(e.iter().map(|v| v / len).collect());
            }
        }
        Ok(Self { z, basis, r })
    }

    pub fn axis(&self) -> &[f64] {
        &self.z
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        math::sqrt(dot(x, x)) > self.r && dot(&self.z, x) > 0.0
    }

    /// `psi_Z` as a map `cone(Z) -> (r, inf) x disk(Z)`.
    pub fn inverse(&self) -> ConeInverse {
        ConeInverse { chart: self.clone() }
    }
}

impl SmoothMap for ConeChart {
    fn in_dim(&self) -> usize {
        self.z.len()
    }
    fn out_dim(&self) -> usize {
        self.z.len()
    }
    fn map<S: Scalar>(&self, v: &[S]) -> Vec<S> {
        let t = &v[0];
        let y = &v[1..];
        let norm2 = y.iter().fold(S::from_f64(0.0), |a, c| a + c.clone() * c.clone());
        let height = (S::from_f64(1.0) - norm2).sqrt();
        (0..self.z.len())
            .map(|c| {
                let lateral = y
                    .iter()
                    .zip(&self.basis)
                    .fold(height.scale(self.z[c]), |a, (yi, e)| a + yi.scale(e[c]));
                t.clone() * lateral
            })
            .collect()
    }
}

/// `psi_Z(X) = (|X|, X / |X| - <X, Z> Z / |X|)` in the basis of `Z^perp`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeInverse {
    chart: ConeChart,
}

impl SmoothMap for ConeInverse {
    fn in_dim(&self) -> usize {
        self.chart.z.len()
    }
    fn out_dim(&self) -> usize {
        self.chart.z.len()
    }
    fn map<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let r = x.iter().fold(S::from_f64(0.0), |a, c| a + c.clone() * c.clone()).sqrt();
        let mut out = vec![r.clone()];
        for e in &self.chart.basis {
            let proj = x
                .iter()
                .zip(e)
                .fold(S::from_f64(0.0), |a, (xc, ec)| a + xc.scale(*ec));
            out.push(proj / r.clone());
        }
        out
    }
}

/// The chart-local extension `f~_Z = E_{r, tau, 1}(f o phi_Z) o psi_Z` on
/// `cone(Z)`.
pub type ConeExtension<F> = Pullback<ExtendedFunction<Pullback<F, ConeChart>>, ConeInverse>;

pub fn extend_in_cone<F: JetFunction>(f: F, chart: &ConeChart, tau: f64, k: usize) -> Result<ConeExtension<F>> {
    let config = OperatorConfig::new(chart.r, tau, 1.0, k)?;
    let local = extend_along(Pullback::new(f, chart.clone()), config, 0)?;
    Ok(Pullback::new(local, chart.inverse()))
}

/// Largest discrepancy between the chart extensions around `z` and `z2`,
/// over all jets of order `<= order` along coordinate axes, at those
/// `samples` lying in both cones.
pub fn cone_chart_agreement<F: JetFunction + Clone>(
    f: &F,
    z: &[f64],
    z2: &[f64],
    r: f64,
    tau: f64,
    order: usize,
    samples: &[Vec<f64>],
) -> Result<f64> {
    let (c1, c2) = (ConeChart::new(z, r)?, ConeChart::new(z2, r)?);
    if dot(c1.axis(), c2.axis()) <= -1.0 + 1e-15 {
        return Err(Error::EmptyOverlap);
    }
    let e1 = extend_in_cone(f.clone(), &c1, tau, order)?;
    let e2 = extend_in_cone(f.clone(), &c2, tau, order)?;
    let p = z.len();
    let mut seen = 0;
    let mut worst: f64 = 0.0;
    for x in samples.iter().filter(|x| c1.contains(x) && c2.contains(x)) {
        seen += 1;
        let point = Point(x.clone());
        for ell in 0..=order {
            for code in 0..p.pow(ell as u32) {
                let tuple: Vec<Tangent> = (0..ell)
                    .map(|i| Tangent::unit(p, code / p.pow(i as u32) % p))
                    .collect();
                let a = e1.jet(&point, &tuple)?;
                let b = e2.jet(&point, &tuple)?;
                worst = worst.max(value::max_abs_diff(&a, &b));
            }
        }
    }
    if seen == 0 {
        return Err(Error::EmptyOverlap);
    }
    Ok(worst)
}
