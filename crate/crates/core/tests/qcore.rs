use proptest::prelude::*;
use qsplit_core::qcore::random::{ginibre, haar_unitary_with, random_density_with, random_hermitian_with, rng_from_seed};
use qsplit_core::qcore::textfmt::{read_operator, read_state, write_operator, write_state};
use qsplit_core::qcore::{random_pure, spectral_decomposition, CompositeSpace, Operator, C64, DEFAULT_CLUSTER_TOL};

fn ginibre_op(dims: Vec<usize>, seed: u64) -> Operator {
    let space = CompositeSpace::new(dims).unwrap();
    let n = space.total();
    let mut rng = rng_from_seed(seed);
    let m = ginibre(n, n, &mut rng);
    let norm = m.norm();
    Operator::new(m / C64::new(norm, 0.0), space).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_product_is_associative(a in 1usize..4, b in 1usize..4, c in 1usize..4, seed: u64) {
        let x = ginibre_op(vec![a], seed);
        let y = ginibre_op(vec![b], seed.wrapping_add(1));
        let z = ginibre_op(vec![c], seed.wrapping_add(2));
        let left = x.tensor(&y).tensor(&z);
        let right = x.tensor(&y.tensor(&z));
        prop_assert_eq!(left.space(), right.space());
        prop_assert!((&left - &right).max_abs() < 1e-12);
    }

    #[test]
    fn sequential_partial_traces_give_the_trace(a in 1usize..4, b in 1usize..4, c in 1usize..4, seed: u64) {
        let m = ginibre_op(vec![a, b, c], seed);
        let reduced = m.partial_trace(&[0, 1]).unwrap().partial_trace(&[0]).unwrap();
        prop_assert_eq!(reduced.space().dims(), &[a]);
        prop_assert!((reduced.trace() - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_universal_property(a in 1usize..4, b in 1usize..4, seed: u64) {
        let m = ginibre_op(vec![a, b], seed);
        let bop = ginibre_op(vec![b], seed ^ 0xabc);
        let lhs = m.partial_trace(&[1]).unwrap().compose(&bop).unwrap().trace();
        let lifted = Operator::identity(CompositeSpace::single(a)).tensor(&bop);
        let rhs = m.compose(&lifted).unwrap().trace();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn observable_round_trip(d in 2usize..6, seed: u64) {
        let mut rng = rng_from_seed(seed);
        let h = random_hermitian_with(CompositeSpace::single(d), &mut rng);
        let obs = spectral_decomposition(&h, DEFAULT_CLUSTER_TOL).unwrap();
        let again = spectral_decomposition(&obs.reconstruct(), DEFAULT_CLUSTER_TOL).unwrap();
        prop_assert_eq!(obs.spectrum().len(), again.spectrum().len());
        for (p, q) in obs.spectrum().iter().zip(again.spectrum()) {
            prop_assert!((&p.projector - &q.projector).max_abs() < 1e-9);
        }
    }

    #[test]
    fn text_format_round_trips(d in 1usize..5, seed: u64) {
        let op = ginibre_op(vec![d, 2], seed);
        prop_assert_eq!(read_operator(&write_operator(&op)).unwrap(), op);
        let psi = random_pure(CompositeSpace::new(vec![2, d]).unwrap(), seed);
        prop_assert_eq!(read_state(&write_state(&psi)).unwrap(), psi);
    }

    #[test]
    fn random_density_has_requested_rank(d in 2usize..6, seed: u64) {
        let mut rng = rng_from_seed(seed);
        let rank = 1 + (seed as usize) % d;
        let rho = random_density_with(CompositeSpace::single(d), rank, &mut rng).unwrap();
        prop_assert!(rho.is_density(1e-10));
        let count = rho.hermitian_eigenvalues().iter().filter(|&&x| x > 1e-10).count();
        prop_assert_eq!(count, rank);
    }
}

#[test]
fn haar_second_moment() {
    // E|tr U|² = 1 for Haar U in any dimension; Var|tr U|² = 1 for d = 2.
    let n = 5000;
    let mut rng = rng_from_seed(11);
    let samples: Vec<f64> = (0..n)
        .map(|_| haar_unitary_with(CompositeSpace::single(2), &mut rng).trace().norm_sqr())
        .collect();
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se = (var / n as f64).sqrt();
    assert!((mean - 1.0).abs() < 3.0 * se, "mean {mean}, se {se}");
}

#[test]
fn random_unitary_is_deterministic() {
    let a = qsplit_core::qcore::random_unitary(CompositeSpace::single(4), 9);
    let b = qsplit_core::qcore::random_unitary(CompositeSpace::single(4), 9);
    assert_eq!(a, b);
    assert!(a.is_unitary(1e-12));
}
