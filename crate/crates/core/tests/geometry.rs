use seeley_core::geometry::{
    cone_chart_agreement, extend_ball, extend_disk_polar, section_angle, ConeChart, RadialDomain,
};
use seeley_core::source::{AnalyticSource, Domain};
use seeley_core::testfns::TestFunction;
use seeley_core::{Error, JetFunction, Point, Tangent};

fn disk_source(k: usize) -> AnalyticSource<TestFunction> {
    AnalyticSource::new(TestFunction::disk_sample(), Domain::unit_ball(2), k)
}

#[test]
fn ball_extension_delegates_and_vanishes() {
    let domain = RadialDomain::new(2, -0.4, -0.2, 3).unwrap();
    let ext = extend_ball(disk_source(3), domain.clone()).unwrap();
    let inside = Point(vec![0.3, -0.6]);
    assert_eq!(ext.jet(&inside, &[]).unwrap(), vec![0.3 * 0.3 - 0.6]);
    let r = domain.vanishing_radius();
    assert!((r - 1.4).abs() < 1e-15);
    for theta in [0.0, 1.0, 2.5, 4.0] {
        for s in [r, r + 0.1, 3.0] {
            let p = Point(vec![s * f64::cos(theta), s * f64::sin(theta)]);
            assert_eq!(ext.jet(&p, &[]).unwrap(), vec![0.0]);
            assert_eq!(ext.jet(&p, &[Tangent(vec![1.0, 0.5])]).unwrap(), vec![0.0]);
        }
    }
}

#[test]
fn polar_route_agrees_with_ball() {
    let domain = RadialDomain::new(2, -0.4, -0.2, 2).unwrap();
    let ball = extend_ball(disk_source(2), domain.clone()).unwrap();
    let polar = extend_disk_polar(disk_source(2), &domain, 0.5).unwrap();
    for i in 0..12 {
        let theta = i as f64 * 0.5;
        for s in [0.2, 0.8, 1.0, 1.05, 1.2, 1.39] {
            let p = Point(vec![s * f64::cos(theta), s * f64::sin(theta)]);
            let a = ball.jet(&p, &[]).unwrap()[0];
            let b = polar.jet(&p, &[]).unwrap()[0];
            assert!((a - b).abs() < 1e-10, "s={s} theta={theta}: {a} vs {b}");
        }
    }
}

#[test]
fn section_angle_range() {
    for (x, y) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 1e-3), (-1.0, -1e-3), (0.5, -0.5)] {
        let a = section_angle(x, y);
        assert!((0.0..2.0 * std::f64::consts::PI).contains(&a));
        assert!((a.cos() * f64::hypot(x, y) - x).abs() < 1e-12);
        assert!((a.sin() * f64::hypot(x, y) - y).abs() < 1e-12);
    }
}

#[test]
fn overlapping_cones_agree() {
    let f = disk_source(2);
    let samples: Vec<Vec<f64>> = (0..40)
        .flat_map(|i| {
            let theta = 0.2 + 0.01 * i as f64;
            [1.05, 1.2, 1.3].map(|s| vec![s * f64::cos(theta), s * f64::sin(theta)])
        })
        .collect();
    let z = [f64::cos(0.3), f64::sin(0.3)];
    let z2 = [f64::cos(0.5), f64::sin(0.5)];
    let d = cone_chart_agreement(&f, &z, &z2, 0.5, 0.6, 2, &samples).unwrap();
    assert!(d < 1e-9, "{d}");
    assert_eq!(
        cone_chart_agreement(&f, &[1.0, 0.0], &[-1.0, 0.0], 0.5, 0.6, 2, &samples),
        Err(Error::EmptyOverlap)
    );
    assert!(ConeChart::new(&[0.0, 0.0], 0.5).is_err());
}
