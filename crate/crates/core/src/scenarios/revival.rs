//! A system spin recorded by a chain of C-NOTs, then un-recorded.

use rand::Rng;

use super::report::ScenarioReport;
use crate::error::{Error, Result};
use crate::measure::{decoherence_eta, DEFAULT_WEIGHT_THRESHOLD};
use crate::qcore::gates::{cnot, up, up_x};
use crate::qcore::random::rng_from_seed;
use crate::qcore::{Basis, Circuit, CompositeSpace, Evolution, Operator, StateVector};
use crate::seed::derive_seed;

pub const MAX_ENVIRONMENT: usize = 12;

fn p_up_x(psi: &StateVector) -> Result<f64> {
    Ok(psi.reduced_density(&[0])?.expectation(&up_x()).re)
}

/// `(|↑⟩+|↓⟩)/√2 ⊗ |↑…↑⟩`, C-NOT from the system to each of `n` environment
/// spins, optionally a z-collapse of the system, then the inverse chain.
pub fn coherence_revival(n: usize, collapse_model: bool, seed: u64, tol: f64) -> Result<ScenarioReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("environment size must be at least 1".into()));
    }
    if n > MAX_ENVIRONMENT {
        return Err(Error::ResourceLimit(format!("environment size {n} exceeds {MAX_ENVIRONMENT}")));
    }
    let space = CompositeSpace::qubits(n + 1);
    let mut parts = vec![up_x()];
    parts.extend((0..n).map(|_| up()));
    let psi0 = StateVector::product(&parts.iter().collect::<Vec<_>>())?;

    let mut chain = Circuit::new(space);
    for k in 1..=n {
        chain.push(cnot(), &[0, k])?;
    }
    let undo = chain.inverse();
    let recorded = chain.evolve(&psi0)?;

    let mut report = ScenarioReport::new("coherence_revival");
    report.observe("environment_size", n as f64);
    let eta = decoherence_eta(&recorded, &[0], &Basis::z(), DEFAULT_WEIGHT_THRESHOLD)?.eta;
    report.expect("eta_z_after_chain", eta, 0.0, tol);

    if !collapse_model {
        let fin = undo.evolve(&recorded)?;
        report.expect("p_up_x", p_up_x(&fin)?, 1.0, tol);
        report.expect("final_state_fidelity", fin.fidelity(&psi0), 1.0, tol);
        return Ok(report);
    }

    // Collapse taken as physical: enumerate both z outcomes for the ensemble,
    // and also follow one Born-sampled run.
    let mut ensemble = 0.0;
    let mut per_branch = Vec::new();
    for k in 0..2 {
        let projector = Operator::projector(&StateVector::basis(CompositeSpace::single(2), k));
        if let Some((branch, w)) = recorded.project_local(&projector, &[0])? {
            let p = p_up_x(&undo.evolve(&branch)?)?;
            ensemble += w * p;
            per_branch.push((w, p));
        }
    }
    report.expect("p_up_x", ensemble, 0.5, tol);

    let mut rng = rng_from_seed(derive_seed(seed, "coherence_revival/collapse"));
    let x: f64 = rng.random();
    let sampled = if x < per_branch[0].0 || per_branch.len() == 1 { 0 } else { 1 };
    report.observe("sampled_outcome", sampled as f64);
    report.expect("p_up_x_sampled_run", per_branch[sampled].1, 0.5, tol);
    Ok(report)
}
