use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seeley_core::halfline::{extend, translate_b, truncation_index};
use seeley_core::source::{AnalyticSource, Domain};
use seeley_core::testfns::TestFunction;
use seeley_core::verify::fd::richardson;
use seeley_core::{JetFunction, OperatorConfig, Point, Tangent};

fn exp_source(b: f64, k: usize) -> AnalyticSource<TestFunction> {
    AnalyticSource::new(TestFunction::Exp { dim: 1 }, Domain::half_space(b), k)
}

#[test]
fn translate_round_trip_on_dyadic_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let b = rng.random_range(-64i32..64) as f64 / 8.0;
        let tau = b - rng.random_range(1i32..64) as f64 / 16.0;
        let c = OperatorConfig::new(f64::NEG_INFINITY, tau, b, 2).unwrap();
        let (n, tr) = translate_b(&c);
        assert_eq!(n.b, 0.0);
        let t = rng.random_range(-1i64 << 20..1i64 << 20) as f64 / 1024.0;
        assert_eq!(tr.to_external(tr.to_internal(t)), t);
        assert_eq!(tr.to_internal(tr.to_external(t)), t);
    }
}

#[test]
fn truncation_index_kills_every_later_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let tau = -rng.random_range(0.1..3.0);
        let t = rng.random_range(1e-4..4.0);
        let j = truncation_index(t, tau);
        for later in j..j + 8 {
            assert!(-((1u64 << later) as f64) * t <= tau);
        }
        if j > 0 {
            assert!(-((1u64 << (j - 1)) as f64) * t > tau);
        }
    }
}

#[test]
fn second_jet_of_exp_converges_at_the_boundary() {
    let ext = extend(exp_source(0.0, 2), OperatorConfig::new(f64::NEG_INFINITY, -1.0, 0.0, 2).unwrap()).unwrap();
    let w = vec![Tangent(vec![1.0]); 2];
    let rows: Vec<Vec<f64>> = (3..=6)
        .map(|r| ext.jet(&Point(vec![10f64.powi(-r)]), &w).unwrap())
        .collect();
    let (limit, _) = richardson(&rows, 10.0, |m| m as i32, false);
    assert!((limit[0] - 1.0).abs() < 1e-5, "{limit:?}");
}

#[test]
fn shifted_boundary_with_finite_a() {
    let (a, tau, b) = (-1.0, 0.5, 1.0);
    let k = 3;
    let f = AnalyticSource::new(TestFunction::Exp { dim: 1 }, Domain::time_interval(a, b), k);
    let ext = extend(f.clone(), OperatorConfig::new(a, tau, b, k).unwrap()).unwrap();
    // delegation on (a, b]
    for t in [-0.5, 0.0, 0.75, 1.0] {
        let p = Point(vec![t]);
        assert_eq!(ext.jet(&p, &[]).unwrap(), f.jet(&p, &[]).unwrap());
    }
    // zero beyond 2b - tau
    for t in [1.5, 1.75, 3.0, 100.0] {
        for ell in 0..=k {
            let w = vec![Tangent(vec![1.0]); ell];
            assert_eq!(ext.jet(&Point(vec![t]), &w).unwrap(), vec![0.0]);
        }
    }
    // continuous across b
    let inside = ext.jet(&Point(vec![b]), &[]).unwrap()[0];
    let outside = ext.jet(&Point(vec![b + 1e-9]), &[]).unwrap()[0];
    assert!((inside - outside).abs() < 1e-7);
}

#[test]
fn space_variables_ride_along() {
    let k = 2;
    let f = AnalyticSource::new(TestFunction::ExpCos, Domain::half_space(0.0), k);
    let ext = extend(f, OperatorConfig::new(f64::NEG_INFINITY, -1.0, 0.0, k).unwrap()).unwrap();
    let t = 0.01;
    let x = 0.3;
    let w = [Tangent(vec![0.0, 1.0])];
    let dx = ext.jet(&Point(vec![t, x]), &w).unwrap()[0];
    let h = 1e-5;
    let fd = (ext.jet(&Point(vec![t, x + h]), &[]).unwrap()[0] - ext.jet(&Point(vec![t, x - h]), &[]).unwrap()[0])
        / (2.0 * h);
    assert!((dx - fd).abs() < 1e-8, "{dx} {fd}");
}
