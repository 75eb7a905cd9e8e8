use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seeley_core::halfline::extend;
use seeley_core::quadrant::{extend_quadrant, quadrant_jet, QuadrantConfig};
use seeley_core::source::{AnalyticSource, Domain};
use seeley_core::testfns::TestFunction;
use seeley_core::{JetFunction, OperatorConfig, Point, Tangent};

fn corner(terms: Vec<(f64, Vec<u32>)>, k: usize) -> AnalyticSource<TestFunction> {
    let domain = Domain::Box {
        lo: vec![-1.0, -1.0],
        hi: vec![0.0, 0.0],
    };
    AnalyticSource::new(TestFunction::Polynomial { dim: 2, terms }, domain, k)
}

fn config(k: usize) -> QuadrantConfig {
    QuadrantConfig::uniform(2, -1.0, -0.5, 0.0, k).unwrap()
}

#[test]
fn product_is_reproduced_near_the_corner() {
    let ext = extend_quadrant(corner(vec![(1.0, vec![1, 1])], 3), config(3)).unwrap();
    let eps = config(3).axes()[0].reproduction_radius();
    for (u, v) in [(eps, eps), (eps / 2.0, eps / 3.0), (eps / 7.0, eps)] {
        let got = ext.jet(&Point(vec![u, v]), &[]).unwrap()[0];
        assert!((got - u * v).abs() < 1e-15, "{got} vs {}", u * v);
    }
}

#[test]
fn gradient_of_a_sum() {
    let ext = extend_quadrant(corner(vec![(1.0, vec![1, 0]), (1.0, vec![0, 1])], 2), config(2)).unwrap();
    let eps = 1e-3;
    let p = Point(vec![eps, eps]);
    for axis in 0..2 {
        let g = quadrant_jet(&ext, &p, &[Tangent::unit(2, axis)]).unwrap()[0];
        assert!((g - 1.0).abs() < 1e-10, "axis {axis}: {g}");
    }
}

#[test]
fn restriction_and_vanishing() {
    let cfg = config(2);
    let f = corner(vec![(1.0, vec![2, 1]), (-0.5, vec![0, 3])], 2);
    let ext = extend_quadrant(f.clone(), cfg.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let p = Point(vec![rng.random_range(-0.99..=0.0), rng.random_range(-0.99..=0.0)]);
        assert_eq!(ext.jet(&p, &[]).unwrap(), f.jet(&p, &[]).unwrap());
    }
    for _ in 0..1000 {
        let axis = rng.random_range(0..2usize);
        let mut c = vec![rng.random_range(-0.9..2.0), rng.random_range(-0.9..2.0)];
        c[axis] = rng.random_range(0.5..3.0);
        let p = Point(c);
        assert!(cfg.in_vanishing_region(&p));
        let w = [Tangent(vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])];
        assert_eq!(ext.jet(&p, &[]).unwrap(), vec![0.0]);
        assert_eq!(ext.jet(&p, &w).unwrap(), vec![0.0]);
    }
}

#[test]
fn single_axis_matches_halfline() {
    let k = 2;
    let f = AnalyticSource::new(TestFunction::Exp { dim: 1 }, Domain::time_interval(-1.0, 0.0), k);
    let cfg = OperatorConfig::new(-1.0, -0.5, 0.0, k).unwrap();
    let q = extend_quadrant(f.clone(), QuadrantConfig::new(vec![cfg]).unwrap()).unwrap();
    let h = extend(f, cfg).unwrap();
    for t in [0.01, 0.1, 0.2, 0.4, 0.6] {
        let w = [Tangent(vec![1.0])];
        assert_eq!(q.jet(&Point(vec![t]), &w).unwrap(), h.jet(&Point(vec![t]), &w).unwrap());
    }
}

#[test]
fn arity_mismatch_is_rejected() {
    let f = AnalyticSource::new(TestFunction::Exp { dim: 1 }, Domain::half_space(0.0), 1);
    assert!(extend_quadrant(f, QuadrantConfig::uniform(2, -1.0, -0.5, 0.0, 1).unwrap()).is_err());
}
