use qsplit_core::qcore::random::rng_from_seed;
use qsplit_core::qcore::{Basis, C64};
use qsplit_core::scenarios::{bell_recording, coherence_revival, jsq_signaling, wigner_friend, BellRecordingParams, FriendParams, JsqParams};
use rand::Rng;

#[test]
fn revival_is_independent_of_environment_size() {
    for n in 1..=12 {
        let r = coherence_revival(n, false, 0, 1e-12).unwrap();
        assert!(r.passed(), "n = {n}: {:?}", r.failures().collect::<Vec<_>>());
        assert!((r.quantity("p_up_x").unwrap().predicted - 1.0).abs() < 1e-12);
    }
}

#[test]
fn revival_rejects_oversized_environments() {
    assert!(coherence_revival(13, false, 0, 1e-12).is_err());
    assert!(coherence_revival(0, false, 0, 1e-12).is_err());
}

#[test]
fn bell_branches_are_products_for_any_bases() {
    let mut rng = rng_from_seed(31);
    for _ in 0..50 {
        let mut angles = || (rng.random_range(0.0..std::f64::consts::PI), rng.random_range(0.0..std::f64::consts::TAU));
        let ((t1, p1), (t2, p2)) = (angles(), angles());
        let c1 = C64::from_polar(rng.random_range(0.1..1.0), rng.random_range(0.0..6.0));
        let c2 = C64::from_polar((1.0 - c1.norm_sqr()).sqrt(), rng.random_range(0.0..6.0));
        let p = BellRecordingParams {
            c1,
            c2,
            basis_b: Basis::qubit_angles(t1, p1),
            basis_b2: Basis::qubit_angles(t2, p2),
            ..BellRecordingParams::default()
        };
        let r = bell_recording(&p, 1e-12).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.branch_data.as_ref().unwrap().iter().all(|b| b.product));
    }
}

#[test]
fn friend_variants_at_general_parameters() {
    let p = FriendParams {
        c1: C64::new(0.6, 0.0),
        c2: C64::new(0.0, 0.8),
        alpha: C64::from_polar(0.9f64.sqrt(), 0.3),
        beta: C64::from_polar(0.1f64.sqrt(), -1.1),
    };
    for v in 1..=4 {
        let r = wigner_friend(v, &p, 1e-12).unwrap();
        assert!(r.passed(), "variant {v}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn jsq_signals_but_the_local_channel_does_not() {
    let r = jsq_signaling(&JsqParams::default(), 1e-12).unwrap();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert!(r.quantity("local_channel_bob_marginal_distance").unwrap().predicted < 1e-10);
}

#[test]
fn reports_are_reproducible() {
    let a = jsq_signaling(&JsqParams { seed: 5, ..JsqParams::default() }, 1e-12).unwrap();
    let b = jsq_signaling(&JsqParams { seed: 5, ..JsqParams::default() }, 1e-12).unwrap();
    assert_eq!(a, b);
}
