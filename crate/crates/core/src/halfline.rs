//! The extension operator `E_{a,tau,b}` for maps on `(a, b) x V`.
//!
//! For `t > b` (after translating `b` to `0`) the extension and its
//! differentials are the locally finite sums
//!
//! ```text
//! f~(t, x)          = sum_j c_j rho(-2^j t) f(-2^j t, x)
//! d^l f~((t,x), w)  = sum_j c_j Psi^l[f, -2^j]((t,x), w)
//! Psi^l[f, d]       = sum_{q=0}^{l} Lambda_{l,q}[f, d]
//! Lambda_{l,q}[f,d] = sum_{p=q}^{l} sum_{I_{l,p}} C(p,q) d^p X_z(w) rho^(q)(d t)
//!                         d^{l-q} f((d t, x), v(w_o1), ..., v(w_o{l-p}), 1_{p-q})
//! ```
//!
//! where `rho` is `0` below `tau` and `1` on `[upsilon, 0]`. For `t <= b`
//! every query is delegated to the source. A finite `a` is handled by
//! multiplying the source with a second cutoff that vanishes below `kappa`
//! and equals `1` above `kappa'`.

use alloc::format;
use alloc::vec::Vec;

use crate::coeffs::{compute_coefficients, SeeleyCoefficients};
use crate::error::{Error, Result};
use crate::jets::{check_query, chi_product_on, enumerate_splits, IndexSplit, JetFunction, Point, Tangent};
use crate::math;
use crate::smoothstep::SmoothStep;
use crate::value::{self, CompensatedSum, Value};

/// Parameters of one operator instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorConfig {
    /// Left end of the source interval; may be `-inf`.
    pub a: f64,
    pub tau: f64,
    pub b: f64,
    /// Start of the flat region of the cutoff, `tau < upsilon < b`.
    pub upsilon: f64,
    pub k: usize,
    /// Finite-`a` cutoff, `a < kappa < kappa' < tau`; ignored when `a = -inf`.
    pub kappa: f64,
    pub kappa_prime: f64,
}

impl OperatorConfig {
    /// Defaults: `upsilon` halfway between `tau` and `b`; `kappa`, `kappa'` at
    /// the thirds of `(a, tau)`.
    pub fn new(a: f64, tau: f64, b: f64, k: usize) -> Result<Self> {
        let (kappa, kappa_prime) = if a.is_finite() {
            (a + (tau - a) / 3.0, a + 2.0 * (tau - a) / 3.0)
        } else {
            (f64::NEG_INFINITY, f64::NEG_INFINITY)
        };
        let config = Self {
            a,
            tau,
            b,
            upsilon: tau + (b - tau) / 2.0,
            k,
            kappa,
            kappa_prime,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_upsilon(mut self, upsilon: f64) -> Result<Self> {
        self.upsilon = upsilon;
        self.validate()?;
        Ok(self)
    }

    pub fn with_kappas(mut self, kappa: f64, kappa_prime: f64) -> Result<Self> {
        self.kappa = kappa;
        self.kappa_prime = kappa_prime;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.a.is_nan() || self.a == f64::INFINITY {
            return fail("a must be a real number or -inf");
        }
        if !(self.tau.is_finite() && self.b.is_finite() && self.upsilon.is_finite()) {
            return fail("tau, upsilon and b must be finite");
        }
        if !(self.a < self.tau) {
            return Err(Error::InvalidConfig(format!("need a < tau, got a = {}, tau = {}", self.a, self.tau)));
        }
        if !(self.tau < self.b) {
            return Err(Error::InvalidConfig(format!("need tau < b, got tau = {}, b = {}", self.tau, self.b)));
        }
        if !(self.tau < self.upsilon && self.upsilon < self.b) {
            return Err(Error::InvalidConfig(format!(
                "need tau < upsilon < b, got upsilon = {}",
                self.upsilon
            )));
        }
        if self.a.is_finite()
            && !(self.a < self.kappa && self.kappa < self.kappa_prime && self.kappa_prime < self.tau)
        {
            return Err(Error::InvalidConfig(format!(
                "need a < kappa < kappa' < tau, got kappa = {}, kappa' = {}",
                self.kappa, self.kappa_prime
            )));
        }
        Ok(())
    }

    /// Beyond `2b - tau` the extension vanishes identically.
    pub fn vanishing_threshold(&self) -> f64 {
        2.0 * self.b - self.tau
    }

    /// On `(b, b + reproduction_radius]` every cutoff factor equals `1`, so
    /// polynomials of degree `<= k` are reproduced exactly.
    pub fn reproduction_radius(&self) -> f64 {
        (self.b - self.upsilon) / math::powi(2.0, self.k as i32)
    }
}

/// The shift `t -> t - b` that moves the boundary to `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Translation {
    pub shift: f64,
}

impl Translation {
    pub fn to_internal(&self, t: f64) -> f64 {
        t - self.shift
    }

    pub fn to_external(&self, s: f64) -> f64 {
        s + self.shift
    }
}

/// Normalize `b` to `0`; tangents are unaffected.
pub fn translate_b(config: &OperatorConfig) -> (OperatorConfig, Translation) {
    let tr = Translation { shift: config.b };
    let normalized = OperatorConfig {
        a: config.a - config.b,
        tau: config.tau - config.b,
        b: 0.0,
        upsilon: config.upsilon - config.b,
        k: config.k,
        kappa: config.kappa - config.b,
        kappa_prime: config.kappa_prime - config.b,
    };
    (normalized, tr)
}

/// Smallest `J` with `-2^j t <= tau` for all `j >= J` (`t > 0 > tau`), i.e.
/// only the terms `j < J` of the reflection sum can be nonzero.
pub fn truncation_index(t: f64, tau: f64) -> usize {
    let target = tau.abs();
    let mut j = 0;
    let mut scaled = t;
    while scaled < target && j < 2100 {
        scaled *= 2.0;
        j += 1;
    }
    j
}

/// `rho_hat(t) f(t, x)` extended by zero to `(-inf, b]`, with jets by the
/// Leibniz rule. Without a finite `a` it is `f` itself.
#[derive(Debug, Clone)]
pub struct FiniteAReduction<S> {
    source: S,
    a: f64,
    b: f64,
    axis: usize,
    cutoff: Option<SmoothStep>,
}

pub fn reduce_finite_a<S: JetFunction>(f: S, config: &OperatorConfig) -> Result<FiniteAReduction<S>> {
    reduce_finite_a_along(f, config, 0)
}

pub fn reduce_finite_a_along<S: JetFunction>(
    f: S,
    config: &OperatorConfig,
    axis: usize,
) -> Result<FiniteAReduction<S>> {
    config.validate()?;
    let cutoff = if config.a.is_finite() {
        Some(SmoothStep::new(config.kappa, config.kappa_prime)?)
    } else {
        None
    };
    Ok(FiniteAReduction {
        source: f,
        a: config.a,
        b: config.b,
        axis,
        cutoff,
    })
}

impl<S> FiniteAReduction<S> {
    pub fn source(&self) -> &S {
        &self.source
    }

    pub fn into_source(self) -> S {
        self.source
    }
}

impl<S: JetFunction> JetFunction for FiniteAReduction<S> {
    fn dim(&self) -> usize {
        self.source.dim()
    }
    fn value_dim(&self) -> usize {
        self.source.value_dim()
    }
    fn order(&self) -> usize {
        self.source.order()
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        check_query(self, point, tuple)?;
        let t = point.coord(self.axis);
        if t > self.b {
            return Err(Error::OutsideDomain { point: point.0.clone() });
        }
        let cutoff = match &self.cutoff {
            None => return self.source.jet(point, tuple),
            Some(c) => c,
        };
        if t <= self.a || t <= cutoff.lo() {
            return Ok(value::zeros(self.value_dim()));
        }
        if t >= cutoff.hi() {
            return self.source.jet(point, tuple);
        }
        let ell = tuple.len();
        let rho = cutoff.eval_jet(t, ell);
        let mut acc = value::zeros(self.value_dim());
        // d^l (rho f)(z; w) = sum_S (prod_{i in S} lambda_i) rho^(|S|) d^{l-|S|} f(z; w_{not S})
        for mask in 0usize..(1 << ell) {
            let m = mask.count_ones() as usize;
            if rho[m] == 0.0 {
                continue;
            }
            let mut lambda = 1.0;
            let mut rest = Vec::with_capacity(ell - m);
            for (i, w) in tuple.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    lambda *= w.lambda(self.axis);
                } else {
                    rest.push(w.clone());
                }
            }
            if lambda == 0.0 {
                continue;
            }
            let v = self.source.jet(point, &rest)?;
            value::axpy(&mut acc, lambda * rho[m], &v);
        }
        Ok(acc)
    }
}

/// The extension `f~` of a source on `(a, b] x V` to `(a, inf) x V`.
#[derive(Debug, Clone)]
pub struct ExtendedFunction<S> {
    config: OperatorConfig,
    axis: usize,
    source: FiniteAReduction<S>,
    coeffs: SeeleyCoefficients,
    /// `rho` in the frame `b = 0`.
    cutoff: SmoothStep,
    splits: Vec<Vec<Vec<IndexSplit>>>,
}

/// Extend along coordinate `0`.
pub fn extend<S: JetFunction>(f: S, config: OperatorConfig) -> Result<ExtendedFunction<S>> {
    extend_along(f, config, 0)
}

/// Extend along coordinate `axis`; the other coordinates play the role of `E`.
pub fn extend_along<S: JetFunction>(f: S, config: OperatorConfig, axis: usize) -> Result<ExtendedFunction<S>> {
    config.validate()?;
    if axis >= f.dim() {
        return Err(Error::InvalidConfig(format!(
            "axis {axis} out of range for a {}-dimensional source",
            f.dim()
        )));
    }
    if f.order() < config.k {
        return Err(Error::InvalidConfig(format!(
            "source provides jets up to order {} but k = {}",
            f.order(),
            config.k
        )));
    }
    let (normalized, _) = translate_b(&config);
    let cutoff = SmoothStep::new(normalized.tau, normalized.upsilon)?;
    let splits = (0..=config.k)
        .map(|ell| (0..=ell).map(|p| enumerate_splits(ell, p)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtendedFunction {
        config,
        axis,
        source: reduce_finite_a_along(f, &config, axis)?,
        coeffs: compute_coefficients(config.k),
        cutoff,
        splits,
    })
}

impl<S: JetFunction> ExtendedFunction<S> {
    pub fn config(&self) -> &OperatorConfig {
        &self.config
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn coefficients(&self) -> &SeeleyCoefficients {
        &self.coeffs
    }

    /// The cutoff `rho` in the frame `b = 0`.
    pub fn cutoff(&self) -> &SmoothStep {
        &self.cutoff
    }

    pub fn source(&self) -> &S {
        self.source.source()
    }

    pub fn reduced_source(&self) -> &FiniteAReduction<S> {
        &self.source
    }

    fn check_factor(d: f64) -> Result<()> {
        if d <= -1.0 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("reflection factor must be <= -1, got {d}")))
        }
    }

    fn internal_time(&self, point: &Point) -> Result<f64> {
        let s = point.coord(self.axis) - self.config.b;
        if s > 0.0 {
            Ok(s)
        } else {
            Err(Error::OutsideDomain { point: point.0.clone() })
        }
    }

    /// `Gamma[f, d] = rho(d t) f(d t, x)` at a point with `t > b`.
    pub fn gamma_eval(&self, d: f64, point: &Point) -> Result<Value> {
        self.psi_ell(d, point, &[])
    }

    /// `Lambda_{l,q}[f, d]((t, x), w)` with `l = w.len()`.
    pub fn lambda_lq(&self, d: f64, q: usize, point: &Point, w: &[Tangent]) -> Result<Value> {
        Self::check_factor(d)?;
        check_query(self, point, w)?;
        let ell = w.len();
        if q > ell {
            return Err(Error::InvalidSplit { ell, p: q });
        }
        let s = self.internal_time(point)?;
        let rho = self.cutoff.eval_jet(d * s, ell);
        self.lambda_inner(d, s, q, rho[q], point, w)
    }

    fn lambda_inner(&self, d: f64, s: f64, q: usize, rho_q: f64, point: &Point, w: &[Tangent]) -> Result<Value> {
        let ell = w.len();
        let mut acc = value::zeros(self.value_dim());
        if rho_q == 0.0 {
            return Ok(acc);
        }
        let src = point.with_coord(self.axis, self.config.b + d * s);
        let unit = Tangent::unit(self.dim(), self.axis);
        for p in q..=ell {
            let factor = math::binomial(p, q) * math::powi(d, p as i32) * rho_q;
            for split in &self.splits[ell][p] {
                let chi = chi_product_on(split, w, self.axis);
                if chi == 0.0 {
                    continue;
                }
                let mut args: Vec<Tangent> = split.o.iter().map(|&i| w[i - 1].space_part(self.axis)).collect();
                args.extend(core::iter::repeat_n(unit.clone(), p - q));
                let v = self.source.jet(&src, &args)?;
                value::axpy(&mut acc, factor * chi, &v);
            }
        }
        Ok(acc)
    }

    /// `Psi^l[f, d] = sum_q Lambda_{l,q}[f, d]`, the continuous extension of
    /// `d^l Gamma[f, d]`.
    pub fn psi_ell(&self, d: f64, point: &Point, w: &[Tangent]) -> Result<Value> {
        Self::check_factor(d)?;
        check_query(self, point, w)?;
        let s = self.internal_time(point)?;
        self.psi_inner(d, s, point, w)
    }

    fn psi_inner(&self, d: f64, s: f64, point: &Point, w: &[Tangent]) -> Result<Value> {
        let ell = w.len();
        let mut acc = value::zeros(self.value_dim());
        if d * s <= self.cutoff.lo() {
            return Ok(acc);
        }
        let rho = self.cutoff.eval_jet(d * s, ell);
        for (q, &rho_q) in rho.iter().enumerate() {
            if rho_q != 0.0 {
                let v = self.lambda_inner(d, s, q, rho_q, point, w)?;
                value::axpy(&mut acc, 1.0, &v);
            }
        }
        Ok(acc)
    }

    /// `Phi[f]^l((t, x), w)`: the source jet for `t <= b`, the reflection
    /// sum for `t > b`.
    pub fn extended_jet(&self, point: &Point, w: &[Tangent]) -> Result<Value> {
        check_query(self, point, w)?;
        let t = point.coord(self.axis);
        if t <= self.config.b {
            return self.source.source().jet(point, w);
        }
        let s = t - self.config.b;
        let terms = truncation_index(s, self.cutoff.lo()).min(self.coeffs.count());
        let mut acc = CompensatedSum::new(self.value_dim());
        for (j, weight) in self.coeffs.shadow().iter().enumerate().take(terms) {
            let d = -math::powi(2.0, j as i32);
            let psi = self.psi_inner(d, s, point, w)?;
            acc.add_weighted(*weight, &psi);
        }
        Ok(acc.finish())
    }
}

impl<S: JetFunction> JetFunction for ExtendedFunction<S> {
    fn dim(&self) -> usize {
        self.source.dim()
    }
    fn value_dim(&self) -> usize {
        self.source.value_dim()
    }
    fn order(&self) -> usize {
        self.config.k
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        self.extended_jet(point, tuple)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{AnalyticSource, Domain};
    use crate::testfns::TestFunction;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn cfg(k: usize) -> OperatorConfig {
        OperatorConfig::new(f64::NEG_INFINITY, -1.0, 0.0, k).unwrap()
    }

    #[test]
    fn config_defaults_and_validation() {
        let c = cfg(2);
        assert_eq!(c.upsilon, -0.5);
        assert!(OperatorConfig::new(f64::NEG_INFINITY, 0.5, 0.0, 2).is_err());
        assert!(cfg(2).with_upsilon(0.1).is_err());
        let c = OperatorConfig::new(-3.0, -1.0, 0.0, 1).unwrap();
        assert!(c.kappa > -3.0 && c.kappa < c.kappa_prime && c.kappa_prime < -1.0);
        assert!(c.with_kappas(-0.5, -0.4).is_err());
        assert_eq!(cfg(3).vanishing_threshold(), 1.0);
        assert_eq!(cfg(3).reproduction_radius(), 0.0625);
    }

    #[test]
    fn truncation_indices() {
        assert_eq!(truncation_index(1.0, -1.0), 0);
        assert_eq!(truncation_index(0.5, -1.0), 1);
        assert_eq!(truncation_index(1.0 / 16.0, -1.0), 4);
        assert_eq!(truncation_index(0.3, -1.0), 2);
    }

    #[test]
    fn translation() {
        let c = OperatorConfig::new(f64::NEG_INFINITY, 0.0, 1.0, 1).unwrap();
        let (n, tr) = translate_b(&c);
        assert_eq!(n.b, 0.0);
        assert_eq!(n.tau, -1.0);
        assert_eq!(tr.to_internal(1.5), 0.5);
        assert_eq!(tr.to_external(0.5), 1.5);
        let (n, tr) = translate_b(&cfg(1));
        assert_eq!(n, cfg(1));
        assert_eq!(tr.to_internal(0.3), 0.3);
    }

    #[test]
    fn gamma_examples() {
        let f = AnalyticSource::new(TestFunction::Exp { dim: 1 }, Domain::half_space(0.0), 2);
        let ext = extend(f, cfg(2)).unwrap();
        let p = Point::new(0.1, &[]);
        assert_relative_eq!(ext.gamma_eval(-1.0, &p).unwrap()[0], libm::exp(-0.1), epsilon = 1e-16);
        assert_eq!(ext.gamma_eval(-16.0, &p).unwrap(), vec![0.0]);
        assert!(ext.gamma_eval(-0.5, &p).is_err());
    }

    #[test]
    fn lambda_hand_evaluation() {
        // f(t) = t, l = 1, q = 0, d = -2: only the p = 1 term survives.
        let f = AnalyticSource::new(TestFunction::monomial(1, 1), Domain::half_space(0.0), 1);
        let ext = extend(f, cfg(1)).unwrap();
        let v = ext
            .lambda_lq(-2.0, 0, &Point::new(0.01, &[]), &[Tangent::new(1.0, &[])])
            .unwrap();
        assert_eq!(v, vec![-2.0]);
        // q >= 1 terms vanish on the flat part of rho
        let v = ext
            .lambda_lq(-2.0, 1, &Point::new(0.01, &[]), &[Tangent::new(1.0, &[])])
            .unwrap();
        assert_eq!(v, vec![0.0]);
    }

    #[test]
    fn psi_chain_rule_on_flat_cutoff() {
        let f = AnalyticSource::new(TestFunction::Exp { dim: 1 }, Domain::half_space(0.0), 1);
        let ext = extend(f, cfg(1)).unwrap();
        let t = 0.2;
        let v = ext
            .psi_ell(-1.0, &Point::new(t, &[]), &[Tangent::new(1.0, &[])])
            .unwrap();
        assert_relative_eq!(v[0], -libm::exp(-t), epsilon = 1e-15);
        let v = ext
            .psi_ell(-1.0, &Point::new(1.5, &[]), &[Tangent::new(1.0, &[])])
            .unwrap();
        assert_eq!(v, vec![0.0]);
    }

    #[test]
    fn constants_and_lines_are_reproduced() {
        let one = AnalyticSource::new(TestFunction::constant(1, 1.0), Domain::half_space(0.0), 3);
        let ext = extend(one, cfg(3)).unwrap();
        let line = AnalyticSource::new(TestFunction::monomial(1, 1), Domain::half_space(0.0), 3);
        let ext_line = extend(line, cfg(3)).unwrap();
        for i in 1..=20 {
            let t = 0.0625 * i as f64 / 20.0;
            assert_eq!(ext.jet(&Point::new(t, &[]), &[]).unwrap(), vec![1.0]);
            let v = ext_line.jet(&Point::new(t, &[]), &[]).unwrap()[0];
            assert!((v - t).abs() <= 1e-16 * t, "t = {t}: {v}");
        }
        assert_eq!(ext.jet(&Point::new(1.0, &[]), &[]).unwrap(), vec![0.0]);
    }

    #[test]
    fn finite_a_reduction() {
        let config = OperatorConfig::new(-1.0, -0.7, 0.0, 2)
            .unwrap()
            .with_kappas(-0.9, -0.8)
            .unwrap();
        let one = AnalyticSource::new(TestFunction::constant(1, 1.0), Domain::time_interval(-1.0, 0.0), 2);
        let red = reduce_finite_a(one, &config).unwrap();
        let step = SmoothStep::new(-0.9, -0.8).unwrap();
        assert_eq!(red.jet(&Point::new(-1.5, &[]), &[]).unwrap(), vec![0.0]);
        assert_eq!(red.jet(&Point::new(-0.5, &[]), &[]).unwrap(), vec![1.0]);
        for t in [-0.89, -0.85, -0.81] {
            assert_eq!(red.jet(&Point::new(t, &[]), &[]).unwrap(), vec![step.eval(t)]);
            let d = red.jet(&Point::new(t, &[]), &[Tangent::new(1.0, &[])]).unwrap();
            assert_relative_eq!(d[0], step.eval_jet(t, 1)[1], epsilon = 1e-12);
        }
        assert!(red.jet(&Point::new(0.1, &[]), &[]).is_err());
        assert!(OperatorConfig::new(-1.0, -0.7, 0.0, 2).unwrap().with_kappas(-0.8, -0.9).is_err());
    }

    #[test]
    fn rejects_underpowered_source() {
        let f = AnalyticSource::new(TestFunction::Exp { dim: 1 }, Domain::half_space(0.0), 1);
        assert!(matches!(extend(f, cfg(2)), Err(Error::InvalidConfig(_))));
    }
}
