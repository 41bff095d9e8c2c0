use proptest::prelude::*;
use qsplit_core::measure::{decoherence_eta, is_diagonal_in, is_recorded, nonselective_measure, outcome_probabilities, selective_measure};
use qsplit_core::qcore::gates::recording_coupling;
use qsplit_core::qcore::random::{haar_unitary_with, random_density_with, random_pure_with, rng_from_seed};
use qsplit_core::qcore::{spectral_decomposition, Basis, CompositeSpace, Observable, Operator, StateVector, C64, DEFAULT_CLUSTER_TOL};
use qsplit_core::Error;
use rand::Rng;

fn random_basis(d: usize, rng: &mut qsplit_core::qcore::random::SeededRng) -> Basis {
    Basis::new(haar_unitary_with(CompositeSpace::single(d), rng).into_matrix(), CompositeSpace::single(d), "random").unwrap()
}

fn degenerate_observable(d: usize, seed: u64) -> (Basis, Vec<f64>, Observable) {
    let mut rng = rng_from_seed(seed);
    let basis = random_basis(d, &mut rng);
    let levels = rng.random_range(1..=d);
    let values: Vec<f64> = (0..d).map(|_| rng.random_range(0..levels) as f64).collect();
    let obs = Observable::from_basis(&basis, &values).unwrap();
    (basis, values, obs)
}

/// Recorded state `Σ c_i |b_i⟩|e_i⟩` with orthonormal records.
fn recorded_state(ds: usize, de: usize, seed: u64) -> (Basis, StateVector) {
    let mut rng = rng_from_seed(seed);
    let basis = random_basis(ds, &mut rng);
    let coeffs = random_pure_with(CompositeSpace::single(ds), &mut rng);
    let env = haar_unitary_with(CompositeSpace::single(de), &mut rng);
    let mut amps = nalgebra::DVector::<C64>::zeros(ds * de);
    for i in 0..ds {
        amps += basis.matrix().column(i).kronecker(&env.matrix().column(i)) * coeffs.amplitudes()[i];
    }
    (basis, StateVector::from_vector(amps, CompositeSpace::new(vec![ds, de]).unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn nonselective_is_the_mixture_of_selective_branches(d in 2usize..6, seed: u64) {
        let (_, _, obs) = degenerate_observable(d, seed);
        let rho = random_density_with(CompositeSpace::single(d), d, &mut rng_from_seed(seed ^ 1)).unwrap();
        let mut mixture = Operator::zeros(CompositeSpace::single(d));
        for c in obs.spectrum() {
            match selective_measure(&rho, &obs, c.eigenvalue) {
                Ok((post, p)) => mixture = &mixture + &post.scale(C64::new(p, 0.0)),
                Err(Error::ImpossibleOutcome { .. }) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
        prop_assert!((&nonselective_measure(&rho, &obs).unwrap() - &mixture).max_abs() < 1e-12);
    }

    #[test]
    fn nonselective_keeps_the_statistics(d in 2usize..6, seed: u64) {
        let (basis, _, obs) = degenerate_observable(d, seed);
        let rho = random_density_with(CompositeSpace::single(d), 1 + (seed as usize) % d, &mut rng_from_seed(seed ^ 2)).unwrap();
        let out = nonselective_measure(&rho, &obs).unwrap();
        let (before, after) = (basis.represent(&rho), basis.represent(&out));
        for i in 0..d {
            prop_assert!((before[(i, i)] - after[(i, i)]).norm() < 1e-12);
        }
        prop_assert!((out.trace() - rho.trace()).norm() < 1e-12);
    }

    #[test]
    fn nonselective_is_idempotent(d in 2usize..6, seed: u64) {
        let (_, _, obs) = degenerate_observable(d, seed);
        let rho = random_density_with(CompositeSpace::single(d), d, &mut rng_from_seed(seed ^ 3)).unwrap();
        let once = nonselective_measure(&rho, &obs).unwrap();
        prop_assert!((&nonselective_measure(&once, &obs).unwrap() - &once).max_abs() < 1e-12);
    }

    #[test]
    fn eta_is_blind_to_environment_unitaries(ds in 2usize..4, de in 2usize..5, seed: u64) {
        let mut rng = rng_from_seed(seed);
        let psi = random_pure_with(CompositeSpace::new(vec![ds, de]).unwrap(), &mut rng);
        let basis = random_basis(ds, &mut rng);
        let w = haar_unitary_with(CompositeSpace::single(de), &mut rng);
        let rotated = psi.apply_local(&w, &[1]).unwrap();
        let a = decoherence_eta(&psi, &[0], &basis, 1e-9).unwrap().eta;
        let b = decoherence_eta(&rotated, &[0], &basis, 1e-9).unwrap().eta;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn recorded_states_are_diagonal(ds in 2usize..4, extra in 0usize..2, seed: u64) {
        let (basis, psi) = recorded_state(ds, ds + extra, seed);
        prop_assert!(is_recorded(&psi, &[0], &basis, 1e-10).unwrap());
        prop_assert!(is_diagonal_in(&psi, &[0], &basis, 1e-10).unwrap());
    }

    #[test]
    fn recorded_states_obey_total_probability(ds in 2usize..4, seed: u64) {
        // Any later S-measurement: Born rule on ρ_S equals the mixture over branches.
        let (basis, psi) = recorded_state(ds, ds, seed);
        let later = spectral_decomposition(
            &qsplit_core::qcore::random::random_hermitian_with(CompositeSpace::single(ds), &mut rng_from_seed(seed ^ 4)),
            DEFAULT_CLUSTER_TOL,
        ).unwrap();
        let direct = outcome_probabilities(&psi.reduced_density(&[0]).unwrap(), &later).unwrap();
        let mut mixed = vec![0.0; direct.len()];
        for i in 0..ds {
            let branch = Operator::projector(&basis.vector(i));
            if let Some((post, w)) = psi.project_local(&branch, &[0]).unwrap() {
                for (k, (_, p)) in outcome_probabilities(&post.reduced_density(&[0]).unwrap(), &later).unwrap().into_iter().enumerate() {
                    mixed[k] += w * p;
                }
            }
        }
        for ((_, p), q) in direct.iter().zip(&mixed) {
            prop_assert!((p - q).abs() < 1e-10);
        }
    }
}

#[test]
fn recording_coupling_records_its_basis() {
    let basis = Basis::qubit_angles(0.7, 1.9);
    let u = recording_coupling(&basis, 2).unwrap();
    let mut rng = rng_from_seed(5);
    for _ in 0..20 {
        let s = random_pure_with(CompositeSpace::single(2), &mut rng);
        let out = s.tensor(&StateVector::basis(CompositeSpace::single(2), 0)).unwrap().apply(&u).unwrap();
        assert!(decoherence_eta(&out, &[0], &basis, 1e-9).unwrap().eta < 1e-12);
    }
}
