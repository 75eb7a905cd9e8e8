//! The property suites. Each returns one or more [`PropertyReport`]s.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fd::{one_sided_limit, FdJetOracle, JetLadder};
use super::report::{Measure, PropertyReport, Tally};
use super::vandermonde_solve;
use crate::coeffs::compute_coefficients;
use crate::error::{Error, Result};
use crate::geometry::{cone_chart_agreement, extend_ball, extend_disk_polar, RadialDomain};
use crate::halfline::{extend, ExtendedFunction, OperatorConfig};
use crate::jets::{enumerate_splits, symmetric_decompose, JetFunction, Point, Tangent};
use crate::math;
use crate::quadrant::{extend_quadrant, QuadrantConfig};
use crate::source::{analytic_jet, AnalyticSource, Domain, LinearCombination, LinearMap, Pullback};
use crate::testfns::{TestFunction, TrigExpTerm};
use crate::value::{self, Value};

/// Suite names accepted by [`run_suite`]; `"all"` runs every one.
pub const SUITES: &[&str] = &[
    "coefficients",
    "reproduction",
    "boundary",
    "vanishing",
    "linearity",
    "compatibility",
    "estimates",
    "quadrant",
    "ball",
    "decomposition",
    "fd-oracle",
];

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<PropertyReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    Ok(match name {
        "coefficients" => vec![check_coefficients(12)],
        "reproduction" => vec![check_reproduction(6)],
        "boundary" => suite_boundary(rng),
        "vanishing" => suite_vanishing(rng),
        "linearity" => vec![check_linearity(rng, 100)],
        "compatibility" => suite_compatibility(rng),
        "estimates" => suite_estimates(rng),
        "quadrant" => suite_quadrant(rng),
        "ball" => suite_ball(rng),
        "decomposition" => suite_decomposition(rng),
        "fd-oracle" => vec![fd_self_test(rng)],
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, seed)?);
            }
            out
        }
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

fn random_tangent(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Tangent {
    Tangent((0..dim).map(|_| uniform(rng, -radius, radius)).collect())
}

fn random_tuple(rng: &mut ChaCha8Rng, dim: usize, ell: usize, radius: f64) -> Vec<Tangent> {
    (0..ell).map(|_| random_tangent(rng, dim, radius)).collect()
}

/// `sum_i coef_i t^p_i e^{r_i t} cos(w_i x + phi_i)` with random parameters.
pub fn random_trig_exp(rng: &mut ChaCha8Rng) -> TestFunction {
    let terms = rng.random_range(1..=3);
    TestFunction::TrigExp {
        dim: 2,
        terms: (0..terms)
            .map(|_| TrigExpTerm {
                coef: uniform(rng, -1.0, 1.0),
                t_power: rng.random_range(0..=2),
                rate: uniform(rng, -1.0, 1.0),
                freq: vec![uniform(rng, -2.0, 2.0)],
                phase: uniform(rng, 0.0, 2.0 * PI),
            })
            .collect(),
    }
}

fn halfline_config(k: usize) -> OperatorConfig {
    OperatorConfig::new(f64::NEG_INFINITY, -1.0, 0.0, k).expect("valid default config")
}

fn slab(k: usize, f: TestFunction) -> AnalyticSource<TestFunction> {
    let domain = Domain::Box {
        lo: vec![f64::NEG_INFINITY, -1.0],
        hi: vec![0.0, 1.0],
    };
    AnalyticSource::new(f, domain, k)
}

fn unit_scale(want: &[f64]) -> f64 {
    value::max_abs(want).max(1.0)
}

/// Exact moment identities for `k = 0..=k_max` and agreement of the
/// Lagrange weights with an exact Vandermonde solve.
pub fn check_coefficients(k_max: usize) -> PropertyReport {
    let mut t = Tally::new("coefficients", 0.0, Measure::Absolute);
    for k in 0..=k_max {
        let c = compute_coefficients(k);
        for q in 0..=k {
            t.record(if c.verify_moments(q).is_zero() { 0.0 } else { 1.0 }, 0.0, 1.0);
        }
        t.record(if vandermonde_solve(k) == c.weights() { 0.0 } else { 1.0 }, 0.0, 1.0);
    }
    t.finish()
}

/// `f(t) = t^q` is reproduced on `(0, |upsilon| / 2^k]` for `q <= k <= k_max`.
pub fn check_reproduction(k_max: usize) -> PropertyReport {
    let mut t = Tally::new("reproduction", 1e-13, Measure::Relative);
    for k in 0..=k_max {
        let config = halfline_config(k);
        let radius = config.reproduction_radius();
        for q in 0..=k {
            let f = AnalyticSource::new(TestFunction::monomial(1, q as u32), Domain::half_space(0.0), k);
            let ext = match extend(f, config) {
                Ok(e) => e,
                Err(_) => {
                    t.fail();
                    continue;
                }
            };
            for i in 1..=64 {
                let s = radius * i as f64 / 64.0;
                let want = math::powi(s, q as i32);
                match ext.jet(&Point::new(s, &[]), &[]) {
                    Ok(v) => t.record(v[0], want, want),
                    Err(_) => t.fail(),
                }
            }
        }
    }
    t.finish()
}

/// One-sided jets of the extension at `t = b` against the source jets:
/// the jet ladder for every order, value differences for orders `<= 2`,
/// and the limit of the extended jets along `t = b + 2^-r`.
pub fn check_boundary_match<S: JetFunction>(
    ext: &ExtendedFunction<S>,
    name: &str,
    xs: &[Vec<f64>],
    tuples: &[Vec<Tangent>],
) -> Vec<PropertyReport> {
    let b = ext.config().b;
    let axis = ext.axis();
    let mut ladder = Tally::new(&format!("{name}/jet-ladder"), 1e-6, Measure::Relative);
    let mut values = Tally::new(&format!("{name}/value-fd"), 1e-6, Measure::Relative);
    let mut limit = Tally::new(&format!("{name}/jet-limit"), 1e-6, Measure::Relative);
    let oracle = FdJetOracle::forward();
    for x in xs {
        let mut coords = x.clone();
        coords.insert(axis, b);
        let point = Point(coords);
        for w in tuples {
            let want = match ext.source().jet(&point, w) {
                Ok(v) => v,
                Err(_) => {
                    ladder.fail();
                    continue;
                }
            };
            let scale = unit_scale(&want);
            match JetLadder::default().derivative(ext, &point, w) {
                Ok(e) => ladder.record_slices(&e.value, &want, scale),
                Err(_) => ladder.fail(),
            }
            if w.len() <= 2 && w.iter().all(|v| v.lambda(axis) > 0.0) {
                match oracle.jet(|p: &Point| ext.jet(p, &[]), &point, w) {
                    Ok(e) => values.record_slices(&e.value, &want, scale),
                    Err(_) => values.fail(),
                }
            }
            let unit = Tangent::unit(point.dim(), axis);
            match one_sided_limit(|h| ext.jet(&point.shifted(&unit, h), w), 5, 20) {
                Ok(e) => limit.record_slices(&e.value, &want, scale),
                Err(_) => limit.fail(),
            }
        }
    }
    vec![ladder.finish(), values.finish(), limit.finish()]
}

/// Bitwise agreement with the source at the given points `t <= b`.
pub fn check_restriction<S: JetFunction>(ext: &ExtendedFunction<S>, points: &[Point], tuples: &[Vec<Tangent>]) -> PropertyReport {
    let mut t = Tally::new("restriction", 0.0, Measure::Absolute);
    for p in points {
        for w in tuples {
            match (ext.jet(p, w), ext.source().jet(p, w)) {
                (Ok(a), Ok(b)) => {
                    let same = a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits());
                    t.record(if same { 0.0 } else { 1.0 }, 0.0, 1.0);
                }
                _ => t.fail(),
            }
        }
    }
    t.finish()
}

/// `f(t, x) = e^t cos(x)` on `(-inf, 0] x (-1, 1)`, `k = 4`.
pub fn suite_boundary(rng: &mut ChaCha8Rng) -> Vec<PropertyReport> {
    let ext = extend(slab(4, TestFunction::ExpCos), halfline_config(4)).expect("valid config");
    let xs = vec![vec![-0.5], vec![0.0], vec![0.3], vec![0.7]];
    let mut tuples = Vec::new();
    for ell in 1..=4 {
        for _ in 0..4 {
            let mut w = random_tuple(rng, 2, ell - 1, 1.0);
            w.push(Tangent::new(uniform(rng, 0.5, 1.0), &[uniform(rng, -0.2, 0.2)]));
            tuples.push(w);
        }
        // pure time direction, positive lambdas for the value differences
        tuples.push(vec![Tangent::new(1.0, &[0.0]); ell]);
        tuples.push((0..ell).map(|_| Tangent::new(uniform(rng, 0.2, 1.0), &[uniform(rng, -0.5, 0.5)])).collect());
    }
    let mut out = check_boundary_match(&ext, "boundary", &xs, &tuples);
    let points: Vec<Point> = (0..200)
        .map(|i| Point::new(-3.0 * i as f64 / 199.0, &[uniform(rng, -0.99, 0.99)]))
        .collect();
    let restriction_tuples: Vec<Vec<Tangent>> = (0..=4).map(|ell| random_tuple(rng, 2, ell, 1.0)).collect();
    out.push(check_restriction(&ext, &points, &restriction_tuples));
    out
}

/// Exact zeros of every jet at the given points.
pub fn check_vanishing<J: JetFunction + ?Sized>(
    f: &J,
    name: &str,
    points: &[Point],
    tuple_for: &mut dyn FnMut(usize) -> Vec<Tangent>,
) -> PropertyReport {
    let mut t = Tally::new(name, 0.0, Measure::Absolute);
    for (i, p) in points.iter().enumerate() {
        let w = tuple_for(i);
        match f.jet(p, &w) {
            Ok(v) => {
                for c in v {
                    t.record(if c == 0.0 { 0.0 } else { 1.0 }, 0.0, 1.0);
                }
            }
            Err(_) => t.fail(),
        }
    }
    t.finish()
}

/// `10^4` grid points beyond `2b - tau` for three configurations.
pub fn suite_vanishing(rng: &mut ChaCha8Rng) -> Vec<PropertyReport> {
    let configs = [
        ("vanishing/b=0", OperatorConfig::new(f64::NEG_INFINITY, -1.0, 0.0, 3)),
        ("vanishing/finite-a", OperatorConfig::new(-2.0, -1.0, 0.5, 2)),
        ("vanishing/b=1", OperatorConfig::new(f64::NEG_INFINITY, 0.25, 1.0, 4)),
    ];
    let mut out = Vec::new();
    for (name, config) in configs {
        let config = config.expect("valid config");
        let f = random_trig_exp(rng);
        let source = AnalyticSource::new(f, Domain::time_interval(config.a, config.b), config.k);
        let ext = extend(source, config).expect("valid config");
        let start = config.vanishing_threshold();
        let points: Vec<Point> = (0..100)
            .flat_map(|i| (0..100).map(move |j| Point::new(start + 2.0 * i as f64 / 99.0, &[-1.0 + 2.0 * j as f64 / 99.0])))
            .collect();
        let mut tuples = |i: usize| random_tuple(rng, 2, i % (config.k + 1), 2.0);
        out.push(check_vanishing(&ext, name, &points, &mut tuples));
    }
    out
}

/// `E(alpha f + beta g) = alpha E f + beta E g` on random cases, relative to
/// `|alpha| |E f| + |beta| |E g|` with a unit floor.
pub fn check_linearity(rng: &mut ChaCha8Rng, cases: usize) -> PropertyReport {
    let mut t = Tally::new("linearity", 1e-12, Measure::Relative);
    let config = halfline_config(4);
    for _ in 0..cases {
        let f = slab(4, random_trig_exp(rng));
        let g = slab(4, random_trig_exp(rng));
        let (alpha, beta) = (uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
        let sum = LinearCombination {
            alpha,
            f: f.clone(),
            beta,
            g: g.clone(),
        };
        let (ef, eg, es) = match (extend(f, config), extend(g, config), extend(sum, config)) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            _ => {
                t.fail();
                continue;
            }
        };
        let p = Point::new(uniform(rng, 1e-3, 1.2), &[uniform(rng, -0.9, 0.9)]);
        for ell in 0..=4 {
            let w = random_tuple(rng, 2, ell, 1.0);
            match (ef.jet(&p, &w), eg.jet(&p, &w), es.jet(&p, &w)) {
                (Ok(a), Ok(b), Ok(c)) => {
                    let scale = (alpha.abs() * value::max_abs(&a) + beta.abs() * value::max_abs(&b)).max(1.0);
                    t.record(c[0], alpha * a[0] + beta * b[0], scale);
                }
                _ => t.fail(),
            }
        }
    }
    t.finish()
}

/// Largest difference of the `<= d` jets of two extensions along
/// `[tau, t_max] x {x}` (with `x` and the tangents mapped by `upsilon` for
/// the second one).
pub fn check_compatibility<F: JetFunction, G: JetFunction>(
    name: &str,
    ef: &ExtendedFunction<F>,
    eg: &ExtendedFunction<G>,
    x: &[f64],
    upsilon: &dyn Fn(&[f64]) -> Vec<f64>,
    d: usize,
    tuples: &[Vec<Tangent>],
) -> PropertyReport {
    let mut t = Tally::new(name, 1e-12, Measure::Relative);
    let c = ef.config();
    let t_max = c.vanishing_threshold() + 0.25;
    let map_point = |s: f64, x: &[f64]| Point::new(s, &upsilon(x));
    let map_tangent = |w: &Tangent| Tangent::new(w.lambda(0), &upsilon(&w.coords()[1..]));
    for i in 0..=200 {
        let s = c.tau + (t_max - c.tau) * i as f64 / 200.0;
        for w in tuples.iter().filter(|w| w.len() <= d) {
            let wg: Vec<Tangent> = w.iter().map(map_tangent).collect();
            match (ef.jet(&Point::new(s, x), w), eg.jet(&map_point(s, x), &wg)) {
                (Ok(a), Ok(b)) => t.record_slices(&a, &b, unit_scale(&b)),
                _ => t.fail(),
            }
        }
    }
    t.finish()
}

pub fn suite_compatibility(rng: &mut ChaCha8Rng) -> Vec<PropertyReport> {
    let config = halfline_config(2);
    let x0 = [0.25];
    let identity = |x: &[f64]| x.to_vec();
    let tuples: Vec<Vec<Tangent>> = (0..=2)
        .flat_map(|ell| (0..3).map(|_| random_tuple(rng, 2, ell, 1.0)).collect::<Vec<_>>())
        .collect();
    let f = slab(2, TestFunction::ExpCos);
    let ef = extend(f.clone(), config).expect("valid config");
    let mut out = Vec::new();

    out.push(check_compatibility("compatibility/same", &ef, &ef, &x0, &identity, 2, &tuples));

    // perturbation flat to all orders along x = x0
    let bump = slab(2, TestFunction::FlatBump { center: x0[0], coord: 1, dim: 2 });
    let g = LinearCombination { alpha: 1.0, f: f.clone(), beta: 1.0, g: bump };
    let eg = extend(g, config).expect("valid config");
    out.push(check_compatibility("compatibility/flat-bump", &ef, &eg, &x0, &identity, 2, &tuples));

    // perturbation (x - x0)^3 e^t, agreeing to order 2 along x = x0
    let order_pert = ContactPerturbation { x0: x0[0], power: 3 };
    let g = LinearCombination { alpha: 1.0, f: f.clone(), beta: 1.0, g: order_pert };
    let eg = extend(g, config).expect("valid config");
    out.push(check_compatibility("compatibility/contact-order-2", &ef, &eg, &x0, &identity, 2, &tuples));

    // Upsilon = 2 id: f(t, x) = fbar(t, 2x)
    let fbar = AnalyticSource::new(random_trig_exp(rng), Domain::half_space(0.0), 2);
    let scaled = Pullback::new(
        fbar.clone(),
        LinearMap {
            rows: vec![vec![1.0, 0.0], vec![0.0, 2.0]],
        },
    );
    let e_scaled = extend(scaled, config).expect("valid config");
    let e_bar = extend(fbar, config).expect("valid config");
    let double = |x: &[f64]| x.iter().map(|v| 2.0 * v).collect();
    out.push(check_compatibility("compatibility/upsilon", &e_scaled, &e_bar, &x0, &double, 2, &tuples));
    out
}

/// `(x - x0)^power e^t`, whose jets of order `< power` vanish along `x = x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPerturbation {
    pub x0: f64,
    pub power: u32,
}

impl JetFunction for ContactPerturbation {
    fn dim(&self) -> usize {
        2
    }
    fn value_dim(&self) -> usize {
        1
    }
    fn order(&self) -> usize {
        crate::DEFAULT_K_MAX
    }
    fn jet(&self, point: &Point, tuple: &[Tangent]) -> Result<Value> {
        let shifted = Point(vec![point.t(), point.x()[0] - self.x0]);
        let f = TestFunction::TrigExp {
            dim: 2,
            terms: vec![TrigExpTerm { coef: 1.0, t_power: 0, rate: 1.0, freq: vec![0.0], phase: 0.0 }],
        };
        let mono = TestFunction::Polynomial {
            dim: 2,
            terms: vec![(1.0, vec![0, self.power])],
        };
        let prod = ProductOf(f, mono);
        Ok(analytic_jet(&prod, shifted.coords(), tuple))
    }
}

struct ProductOf(TestFunction, TestFunction);

impl crate::source::Analytic for ProductOf {
    fn dim(&self) -> usize {
        2
    }
    fn value_dim(&self) -> usize {
        1
    }
    fn eval<S: crate::multidual::Scalar>(&self, z: &[S]) -> Vec<S> {
        let a = self.0.eval(z).remove(0);
        let b = self.1.eval(z).remove(0);
        vec![a * b]
    }
}

/// The analytic constant `C_d` of the estimate for order `ell <= d`:
/// `sum |c_j|` for `ell = 0`, otherwise
/// `(d+1) (d+1)! M_d max|I_{l,p}| max_{l <= d} sum_j |c_j| 2^{jl}`.
pub fn estimate_constant<S: JetFunction>(ext: &ExtendedFunction<S>, ell: usize, d: usize) -> f64 {
    let c = ext.coefficients();
    if ell == 0 {
        return c.decay_sum_f64(0);
    }
    let m_d = ext.cutoff().sup_constants(d, 2001).m_p;
    let max_splits = (0..=d)
        .flat_map(|l| (0..=l).map(move |p| enumerate_splits(l, p).map(|s| s.len()).unwrap_or(0)))
        .max()
        .unwrap_or(1) as f64;
    let decay = (0..=d).map(|l| c.decay_sum_f64(l)).fold(0.0, f64::max);
    (d + 1) as f64 * math::factorial(d + 1) * m_d * max_splits * decay
}

/// Measured `|Phi^l((t, x), w)| / max(1, |lambda|)^l` over `t` in
/// `(b, 2b - tau)` against `C_d` times the source seminorm over
/// `[tau, b] x {x}` and tuples from `{1} u {v(w)}`. Reports the largest
/// ratio (must be `<= 1`). The second report checks the sharpened bound
/// `sum |c_j|` for tuples without time components.
pub fn check_estimates<S: JetFunction>(
    ext: &ExtendedFunction<S>,
    name: &str,
    x: &[f64],
    d_max: usize,
    tangents: &[Tangent],
    tuples: &[Vec<Tangent>],
) -> Vec<PropertyReport> {
    let c = *ext.config();
    let dim = x.len() + 1;
    let mut general = Tally::new(name, 1.0, Measure::Absolute);
    let mut sharp = Tally::new(&format!("{name}/space-only"), 1.0, Measure::Absolute);
    let ts: Vec<f64> = (0..48).map(|i| c.b + (c.b - c.tau) * (i as f64 + 0.5) / 48.0).collect();

    // source sample points: a fine grid of [tau, b] and every reflected point
    let mut grid: Vec<f64> = (0..=400).map(|i| c.tau + (c.b - c.tau) * i as f64 / 400.0).collect();
    for &t in &ts {
        for j in 0..ext.coefficients().count() {
            let s = c.b - math::powi(2.0, j as i32) * (t - c.b);
            if s > c.tau {
                grid.push(s);
            }
        }
    }
    let mut dirs = vec![Tangent::unit(dim, 0)];
    dirs.extend(tangents.iter().map(|w| w.space_part(0)));
    // seminorm[j] = sup over grid and j-multisets of dirs; space[j] without the unit
    let mut seminorm = vec![0.0f64; d_max + 1];
    let mut space = vec![0.0f64; d_max + 1];
    for (j, slot) in seminorm.iter_mut().enumerate() {
        for idx in multisets(dirs.len(), j) {
            let tuple: Vec<Tangent> = idx.iter().map(|&i| dirs[i].clone()).collect();
            let space_only = idx.iter().all(|&i| i > 0);
            for &s in &grid {
                let mut coords = vec![s];
                coords.extend_from_slice(x);
                match ext.source().jet(&Point(coords), &tuple) {
                    Ok(v) => {
                        let m = value::max_abs(&v);
                        *slot = slot.max(m);
                        if space_only {
                            space[j] = space[j].max(m);
                        }
                    }
                    Err(_) => general.fail(),
                }
            }
        }
    }
    let constants: Vec<Vec<f64>> = (0..=d_max)
        .map(|ell| (0..=d_max).map(|d| estimate_constant(ext, ell, d)).collect())
        .collect();
    let mut cumulative = seminorm.clone();
    for j in 1..=d_max {
        cumulative[j] = cumulative[j].max(cumulative[j - 1]);
    }

    for &t in &ts {
        let mut coords = vec![t];
        coords.extend_from_slice(x);
        let p = Point(coords);
        for w in tuples.iter().filter(|w| w.len() <= d_max) {
            let ell = w.len();
            let v = match ext.jet(&p, w) {
                Ok(v) => value::max_abs(&v),
                Err(_) => {
                    general.fail();
                    continue;
                }
            };
            let lam = w.iter().map(|u| u.lambda(0).abs()).fold(1.0, f64::max);
            let measured = v / math::powi(lam, ell as i32);
            for d in ell..=d_max {
                let bound = constants[ell][d] * cumulative[d];
                general.record_value(ratio(measured, bound));
            }
            if w.iter().all(|u| u.lambda(0) == 0.0) {
                let bound = ext.coefficients().decay_sum_f64(0) * space[ell];
                sharp.record_value(ratio(v, bound));
            }
        }
    }
    vec![general.finish(), sharp.finish()]
}

fn ratio(measured: f64, bound: f64) -> f64 {
    if measured == 0.0 {
        0.0
    } else {
        measured / bound
    }
}

/// Nondecreasing index tuples of length `len` over `0..n`.
fn multisets(n: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in multisets(n, len - 1) {
        let start = rest.last().copied().unwrap_or(0);
        for i in start..n {
            let mut v = rest.clone();
            v.push(i);
            out.push(v);
        }
    }
    out
}

pub fn suite_estimates(rng: &mut ChaCha8Rng) -> Vec<PropertyReport> {
    let config = halfline_config(3);
    let functions = vec![
        ("estimates/exp-cos", TestFunction::ExpCos),
        ("estimates/trig-exp", random_trig_exp(rng)),
        (
            "estimates/polynomial",
            TestFunction::Polynomial {
                dim: 2,
                terms: vec![(1.0, vec![0, 0]), (2.0, vec![1, 1]), (-1.5, vec![3, 0])],
            },
        ),
        ("estimates/zero", TestFunction::constant(2, 0.0)),
    ];
    let tangents: Vec<Tangent> = (0..5).map(|_| random_tangent(rng, 2, 2.0)).collect();
    let mut tuples = Vec::new();
    for ell in 0..=3 {
        for _ in 0..6 {
            tuples.push((0..ell).map(|_| tangents[rng.random_range(0..tangents.len())].clone()).collect());
        }
        tuples.push(vec![Tangent::unit(2, 0); ell]);
        tuples.push((0..ell).map(|i| tangents[i].space_part(0)).collect());
    }
    // tuples without time parts must draw from the same space parts
    let tangents_with_space: Vec<Tangent> = tangents.clone();
    let mut out = Vec::new();
    for (name, f) in functions {
        let ext = extend(AnalyticSource::new(f, Domain::half_space(0.0), 3), config).expect("valid config");
        out.extend(check_estimates(&ext, name, &[0.4], 3, &tangents_with_space, &tuples));
    }
    out
}

fn corner_source(f: TestFunction, k: usize) -> AnalyticSource<TestFunction> {
    let domain = Domain::Box {
        lo: vec![-1.0, -1.0],
        hi: vec![0.0, 0.0],
    };
    AnalyticSource::new(f, domain, k)
}

pub fn suite_quadrant(rng: &mut ChaCha8Rng) -> Vec<PropertyReport> {
    let k = 3;
    let config = QuadrantConfig::uniform(2, -1.0, -0.6, 0.0, k).expect("valid config");
    let mut out = Vec::new();

    let f = corner_source(TestFunction::ExpCos, k);
    let ext = extend_quadrant(f.clone(), config.clone()).expect("valid config");
    let mut restriction = Tally::new("quadrant/restriction", 0.0, Measure::Absolute);
    for _ in 0..300 {
        let p = Point(vec![uniform(rng, -0.99, 0.0), uniform(rng, -0.99, 0.0)]);
        let ell = rng.random_range(0..=k);
        let w = random_tuple(rng, 2, ell, 1.0);
        match (ext.jet(&p, &w), f.jet(&p, &w)) {
            (Ok(a), Ok(b)) => {
                let same = a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits());
                restriction.record(if same { 0.0 } else { 1.0 }, 0.0, 1.0);
            }
            _ => restriction.fail(),
        }
    }
    out.push(restriction.finish());

    for axis in 0..2 {
        let threshold = config.axes()[axis].vanishing_threshold();
        let points: Vec<Point> = (0..1000)
            .map(|_| {
                let mut c = vec![uniform(rng, -0.9, 2.0), uniform(rng, -0.9, 2.0)];
                c[axis] = uniform(rng, threshold, threshold + 2.0);
                Point(c)
            })
            .collect();
        let name = format!("quadrant/vanishing-axis-{axis}");
        let mut tuples = |i: usize| random_tuple(rng, 2, i % (k + 1), 1.0);
        out.push(check_vanishing(&ext, &name, &points, &mut tuples));
    }

    let radius = config.axes()[0].reproduction_radius();
    let mut poly = Tally::new("quadrant/polynomials", 1e-10, Measure::Relative);
    type Case = (Vec<(f64, Vec<u32>)>, fn(f64, f64) -> f64);
    let polys: Vec<Case> = vec![
        (vec![(1.0, vec![1, 1])], |u, v| u * v),
        (vec![(1.0, vec![2, 1])], |u, v| u * u * v),
        (vec![(1.0, vec![1, 0]), (1.0, vec![0, 1])], |u, v| u + v),
        (vec![(1.0, vec![3, 3])], |u, v| u * u * u * v * v * v),
    ];
    for (terms, closed) in polys {
        let e = extend_quadrant(corner_source(TestFunction::Polynomial { dim: 2, terms }, k), config.clone())
            .expect("valid config");
        for _ in 0..50 {
            let u = uniform(rng, 0.0, radius).max(1e-6);
            let v = if rng.random_bool(0.3) {
                uniform(rng, -0.9, 0.0)
            } else {
                uniform(rng, 1e-6, radius)
            };
            let want = closed(u, v);
            match e.jet(&Point(vec![u, v]), &[]) {
                Ok(a) => poly.record(a[0], want, want.abs().max(1.0)),
                Err(_) => poly.fail(),
            }
        }
    }
    // gradient of u + v near the corner
    let e = extend_quadrant(
        corner_source(
            TestFunction::Polynomial {
                dim: 2,
                terms: vec![(1.0, vec![1, 0]), (1.0, vec![0, 1])],
            },
            k,
        ),
        config.clone(),
    )
    .expect("valid config");
    for axis in 0..2 {
        match e.jet(&Point(vec![0.01, 0.01]), &[Tangent::unit(2, axis)]) {
            Ok(a) => poly.record(a[0], 1.0, 1.0),
            Err(_) => poly.fail(),
        }
    }
    out.push(poly.finish());

    let symmetric = corner_source(
        TestFunction::Polynomial {
            dim: 2,
            terms: vec![(1.0, vec![1, 1]), (1.0, vec![2, 0]), (1.0, vec![0, 2]), (0.5, vec![4, 0]), (0.5, vec![0, 4])],
        },
        k,
    );
    let e = extend_quadrant(symmetric, config).expect("valid config");
    let mut order = Tally::new("quadrant/axis-order-symmetric", 1e-10, Measure::Relative);
    for _ in 0..200 {
        let (u, v) = (uniform(rng, -0.9, 1.5), uniform(rng, -0.9, 1.5));
        match (e.jet(&Point(vec![u, v]), &[]), e.jet(&Point(vec![v, u]), &[])) {
            (Ok(a), Ok(b)) => order.record(a[0], b[0], b[0].abs().max(1.0)),
            _ => order.fail(),
        }
    }
    out.push(order.finish());
    out
}

fn disk(f: TestFunction, k: usize) -> AnalyticSource<TestFunction> {
    AnalyticSource::new(f, Domain::unit_ball(2), k)
}

pub fn suite_ball(rng: &mut ChaCha8Rng) -> Vec<PropertyReport> {
    let k = 3;
    let domain = RadialDomain::new(2, -0.4, -0.2, k).expect("valid domain");
    let f = disk(TestFunction::disk_sample(), k);
    let ball = extend_ball(f.clone(), domain.clone()).expect("valid domain");
    let mut out = Vec::new();

    let mut ladder = Tally::new("ball/radial-jet-ladder", 1e-6, Measure::Relative);
    let mut limit = Tally::new("ball/radial-jet-limit", 1e-6, Measure::Relative);
    for i in 0..12 {
        let theta = 2.0 * PI * i as f64 / 12.0 + 0.1;
        let n = Tangent(vec![math::cos(theta), math::sin(theta)]);
        let p = Point(n.0.clone());
        for ell in 1..=k {
            for _ in 0..3 {
                let mut w = random_tuple(rng, 2, ell - 1, 1.0);
                w.push(n.clone());
                let want = match f.jet(&p, &w) {
                    Ok(v) => v,
                    Err(_) => {
                        ladder.fail();
                        continue;
                    }
                };
                let scale = unit_scale(&want);
                match JetLadder::default().derivative(&ball, &p, &w) {
                    Ok(e) => ladder.record_slices(&e.value, &want, scale),
                    Err(_) => ladder.fail(),
                }
                match one_sided_limit(|h| ball.jet(&p.shifted(&n, h), &w), 5, 20) {
                    Ok(e) => limit.record_slices(&e.value, &want, scale),
                    Err(_) => limit.fail(),
                }
            }
        }
    }
    out.push(ladder.finish());
    out.push(limit.finish());

    let r_stop = domain.vanishing_radius();
    let points: Vec<Point> = (0..50)
        .flat_map(|i| {
            (0..40).map(move |j| {
                let r = r_stop + 1.6 * i as f64 / 49.0;
                let a = 2.0 * PI * j as f64 / 40.0;
                Point(vec![r * math::cos(a), r * math::sin(a)])
            })
        })
        .collect();
    let mut tuples = |i: usize| random_tuple(rng, 2, i % (k + 1), 1.0);
    out.push(check_vanishing(&ball, "ball/vanishing", &points, &mut tuples));

    let polar = extend_disk_polar(f.clone(), &domain, 0.5).expect("valid domain");
    let mut agree = Tally::new("ball/polar-vs-ball", 1e-10, Measure::Relative);
    for i in 0..40 {
        for j in 0..40 {
            let p = Point(vec![-1.6 + 3.2 * (i as f64 + 0.5) / 40.0, -1.6 + 3.2 * (j as f64 + 0.5) / 40.0]);
            match (ball.jet(&p, &[]), polar.jet(&p, &[])) {
                (Ok(a), Ok(b)) => agree.record(b[0], a[0], a[0].abs().max(1.0)),
                _ => agree.fail(),
            }
        }
    }
    out.push(agree.finish());

    let radial = extend_disk_polar(disk(TestFunction::radial_square(), k), &domain, 0.5).expect("valid domain");
    let mut rot = Tally::new("ball/polar-rotation", 1e-10, Measure::Relative);
    for r in [0.7, 1.0, 1.05, 1.2, 1.35] {
        let base = radial.jet(&Point(vec![r, 0.0]), &[]);
        for a in 0..8 {
            let ang = 2.0 * PI * a as f64 / 8.0 + 0.3;
            match (&base, radial.jet(&Point(vec![r * math::cos(ang), r * math::sin(ang)]), &[])) {
                (Ok(b), Ok(v)) => rot.record(v[0], b[0], b[0].abs().max(1.0)),
                _ => rot.fail(),
            }
        }
    }
    out.push(rot.finish());

    let z2 = [math::cos(PI / 6.0), math::sin(PI / 6.0)];
    let overlap: Vec<Vec<f64>> = (0..200)
        .map(|_| {
            let a = uniform(rng, -PI / 3.0 + 0.05, PI / 2.0 - 0.05);
            let r = uniform(rng, 0.55, 1.5);
            vec![r * math::cos(a), r * math::sin(a)]
        })
        .collect();
    let mut cones = Tally::new("ball/cone-charts", 1e-9, Measure::Absolute);
    for g in [TestFunction::monomial(2, 1), TestFunction::disk_sample()] {
        match cone_chart_agreement(&disk(g, 2), &[1.0, 0.0], &z2, 0.5, 0.6, 2, &overlap) {
            Ok(d) => cones.record(d, 0.0, 1.0),
            Err(_) => cones.fail(),
        }
    }
    out.push(cones.finish());

    let a = math::cos(PI / 12.0);
    let b = math::sin(PI / 12.0);
    let ray: Vec<Vec<f64>> = (0..60).map(|i| {
        let r = 0.55 + i as f64 * 0.015;
        vec![r * a, r * b]
    }).collect();
    let mut ray_tally = Tally::new("ball/cone-ray", 1e-12, Measure::Absolute);
    match cone_chart_agreement(&disk(TestFunction::monomial(2, 1), 0), &[1.0, 0.0], &z2, 0.5, 0.6, 0, &ray) {
        Ok(d) => ray_tally.record(d, 0.0, 1.0),
        Err(_) => ray_tally.fail(),
    }
    out.push(ray_tally.finish());

    let mut lin = Tally::new("ball/linearity", 1e-12, Measure::Relative);
    let g = disk(TestFunction::radial_square(), k);
    let eg = extend_ball(g.clone(), domain.clone()).expect("valid domain");
    for _ in 0..50 {
        let (alpha, beta) = (uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0));
        let sum = LinearCombination { alpha, f: f.clone(), beta, g: g.clone() };
        let es = extend_ball(sum, domain.clone()).expect("valid domain");
        let r = uniform(rng, 0.9, 1.5);
        let ang = uniform(rng, 0.0, 2.0 * PI);
        let p = Point(vec![r * math::cos(ang), r * math::sin(ang)]);
        let ell = rng.random_range(0..=k);
        let w = random_tuple(rng, 2, ell, 1.0);
        match (ball.jet(&p, &w), eg.jet(&p, &w), es.jet(&p, &w)) {
            (Ok(x), Ok(y), Ok(z)) => {
                let scale = (alpha.abs() * x[0].abs() + beta.abs() * y[0].abs()).max(1.0);
                lin.record(z[0], alpha * x[0] + beta * y[0], scale);
            }
            _ => lin.fail(),
        }
    }
    out.push(lin.finish());
    out
}

/// `symmetric_decompose` against direct evaluation: on random symmetric
/// forms (differentials of random polynomials) and on the extended jets.
pub fn suite_decomposition(rng: &mut ChaCha8Rng) -> Vec<PropertyReport> {
    let mut forms = Tally::new("decomposition/forms", 1e-10, Measure::Relative);
    for _ in 0..60 {
        let dim = rng.random_range(1..=3);
        let terms: Vec<(f64, Vec<u32>)> = (0..6)
            .map(|_| (uniform(rng, -1.0, 1.0), (0..dim).map(|_| rng.random_range(0..=4)).collect()))
            .collect();
        let poly = TestFunction::Polynomial { dim, terms };
        let z: Vec<f64> = (0..dim).map(|_| uniform(rng, -1.0, 1.0)).collect();
        let ell = rng.random_range(0..=4);
        let w = random_tuple(rng, dim, ell, 1.0);
        let axis = rng.random_range(0..dim);
        let form = |args: &[Tangent]| Ok(analytic_jet(&poly, &z, args));
        let direct = analytic_jet(&poly, &z, &w);
        match symmetric_decompose(form, &w, axis) {
            Ok(v) => forms.record_slices(&v, &direct, unit_scale(&direct)),
            Err(_) => forms.fail(),
        }
    }

    let mut ext_tally = Tally::new("decomposition/extended-jets", 1e-10, Measure::Relative);
    let ext = extend(slab(4, TestFunction::ExpCos), halfline_config(4)).expect("valid config");
    for _ in 0..40 {
        let p = Point::new(uniform(rng, 1e-3, 1.0), &[uniform(rng, -0.9, 0.9)]);
        let ell = rng.random_range(0..=4);
        let w = random_tuple(rng, 2, ell, 1.0);
        let form = |args: &[Tangent]| ext.jet(&p, args);
        match (ext.jet(&p, &w), symmetric_decompose(form, &w, 0)) {
            (Ok(a), Ok(b)) => ext_tally.record_slices(&b, &a, unit_scale(&a)),
            _ => ext_tally.fail(),
        }
    }
    vec![forms.finish(), ext_tally.finish()]
}

/// Central FD jets of 20 closed-form functions against their exact jets;
/// records `|fd - exact| / error estimate`.
pub fn fd_self_test(rng: &mut ChaCha8Rng) -> PropertyReport {
    let mut t = Tally::new("fd-oracle", 1.0, Measure::Absolute);
    let mut functions = vec![
        TestFunction::ExpCos,
        TestFunction::Exp { dim: 2 },
        TestFunction::monomial(2, 3),
        TestFunction::disk_sample(),
        TestFunction::radial_square(),
    ];
    while functions.len() < 20 {
        functions.push(random_trig_exp(rng));
    }
    let oracle = FdJetOracle::central();
    for f in &functions {
        for ell in 1..=4 {
            let z = vec![uniform(rng, -0.5, 0.5), uniform(rng, -1.0, 1.0)];
            let w = random_tuple(rng, 2, ell, 1.0);
            let exact = analytic_jet(f, &z, &w);
            match oracle.jet(|p: &Point| Ok(analytic_jet(f, p.coords(), &[])), &Point(z), &w) {
                Ok(e) => {
                    let diff = value::max_abs_diff(&e.value, &exact);
                    t.record_value(if diff == 0.0 { 0.0 } else { diff / e.error });
                }
                Err(_) => t.fail(),
            }
        }
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", 1), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(7, 3).len(), 84);
        assert_eq!(multisets(4, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn seeded_runs_repeat() {
        assert_eq!(run_suite("linearity", 7).unwrap(), run_suite("linearity", 7).unwrap());
    }
}
