use std::f64::consts::PI;

use qsplit_core::fieldnum::{
    commutator_functions, delta_plus, random_spacelike_points, spacelike_grid, sweep, IntervalKind, IntervalPoint, Method,
    QuadratureConfig,
};
use qsplit_core::Error;

#[test]
fn quadrature_matches_closed_form_on_random_spacelike_points() {
    let points = random_spacelike_points(50, &[0.0, 0.5, 1.0, 2.0], (0.3, 2.0), (-1.5, 1.5), 17);
    for p in &points {
        let q = delta_plus(p, Method::Quadrature, 1e-2).unwrap();
        let c = delta_plus(p, Method::ClosedForm, 1e-2).unwrap();
        assert!((q - c).norm() < 1e-6 * c.norm(), "{p:?}: {q} vs {c}");
    }
}

#[test]
fn lorentz_invariance_along_a_hyperbola() {
    let reference = delta_plus(&IntervalPoint::new(0.0, 1.2, 1.0).unwrap(), Method::Quadrature, 1e-2).unwrap();
    for eta in [-1.0, -0.4, 0.3, 0.9] {
        let p = IntervalPoint::from_rapidity(1.2, eta, 1.0).unwrap();
        let v = delta_plus(&p, Method::Quadrature, 1e-2).unwrap();
        assert!((v - reference).norm() < 1e-8, "eta = {eta}: {v} vs {reference}");
    }
}

#[test]
fn massless_scaling() {
    let base = IntervalPoint::new(0.3, 0.8, 0.0).unwrap();
    let v = delta_plus(&base, Method::Quadrature, 1e-2).unwrap();
    for lambda in [0.5, 2.0, 3.0] {
        let scaled = IntervalPoint::new(lambda * base.t, lambda * base.r, 0.0).unwrap();
        let w = delta_plus(&scaled, Method::Quadrature, 1e-2).unwrap();
        assert!((w * lambda * lambda - v).norm() < 1e-8 * v.norm(), "lambda = {lambda}");
    }
}

#[test]
fn massless_equal_time_value() {
    let p = IntervalPoint::new(0.0, 1.0, 0.0).unwrap();
    let expected = 1.0 / (4.0 * PI * PI);
    for method in [Method::ClosedForm, Method::Quadrature] {
        let v = delta_plus(&p, method, 1e-2).unwrap();
        assert!((v.re - expected).abs() < 1e-9 * expected && v.im.abs() < 1e-12);
    }
}

#[test]
fn massive_spacelike_example() {
    let p = IntervalPoint::new(0.0, 2.0, 1.0).unwrap();
    // m K₁(m s)/(4π² s) with K₁(2) from scipy.
    let expected = 0.13986588181652246 / (8.0 * PI * PI);
    let v = delta_plus(&p, Method::Quadrature, 1e-2).unwrap();
    assert!((v.re - expected).abs() < 1e-8 * expected && v.im.abs() < 1e-12);
}

#[test]
fn commutator_vanishes_spacelike_only() {
    let space = IntervalPoint::from_rapidity(1.5, 0.6, 1.0).unwrap();
    let c = commutator_functions(&space, Method::Quadrature, 1e-2).unwrap();
    assert!(c.antisym.norm() < 1e-8);
    let direct = delta_plus(&space, Method::Quadrature, 1e-2).unwrap();
    assert!((c.sym - direct * 2.0).norm() < 1e-12 && c.sym.im.abs() < 1e-10);

    let time = IntervalPoint::new(2.0, 0.5, 1.0).unwrap();
    let c = commutator_functions(&time, Method::Quadrature, 1e-2).unwrap();
    assert!(c.antisym.norm() > 1e-3);
}

#[test]
fn massless_timelike_commutator_vanishes_off_the_cone() {
    let p = IntervalPoint::new(2.0, 0.5, 0.0).unwrap();
    let c = commutator_functions(&p, Method::ClosedForm, 1e-2).unwrap();
    assert_eq!(c.antisym.norm(), 0.0);
    let q = commutator_functions(&p, Method::Quadrature, 1e-2).unwrap();
    assert!((q.sym - c.sym).norm() < 1e-8 * c.sym.norm());
}

#[test]
fn refusals() {
    let light = IntervalPoint::new(-1.5, 1.5, 0.5).unwrap();
    assert_eq!(light.kind(), IntervalKind::Lightlike);
    assert!(matches!(delta_plus(&light, Method::ClosedForm, 1e-2), Err(Error::Lightlike { .. })));
    let p = IntervalPoint::new(0.0, 1.0, 1.0).unwrap();
    assert!(matches!(delta_plus(&p, Method::Quadrature, 0.0), Err(Error::InvalidParameter(_))));
    // A single damping level leaves nothing to extrapolate against.
    let cfg = QuadratureConfig { levels: 1, ..QuadratureConfig::default() };
    assert!(qsplit_core::fieldnum::delta_plus_with(&p, Method::Quadrature, &cfg).is_err());
}

#[test]
fn nonconvergence_is_reported() {
    // A coarse ladder cannot reach the 1e-12 agreement demanded here.
    let cfg = QuadratureConfig { eps: 0.5, levels: 3, convergence_tol: 1e-12, ..QuadratureConfig::default() };
    let p = IntervalPoint::new(0.5, 1.0, 1.0).unwrap();
    match qsplit_core::fieldnum::delta_plus_with(&p, Method::Quadrature, &cfg) {
        Err(Error::NonConvergence(msg)) => assert!(msg.contains("extrapolants differ")),
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn sweep_rows_classify_points() {
    let mut points = spacelike_grid(&[1.0], (0.5, 1.0), (0.0, 0.5), 2, 2);
    points.push(IntervalPoint::new(2.0, 0.5, 0.0).unwrap());
    let rows = sweep(&points, Method::ClosedForm, &QuadratureConfig::default()).unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows[..4].iter().all(|r| r.kind == IntervalKind::Spacelike && r.s2 > 0.0 && r.antisym_abs == 0.0));
    assert_eq!(rows[4].kind, IntervalKind::Timelike);
}
