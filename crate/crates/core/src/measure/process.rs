//! Conserved bases and measurement processes.

use serde::Serialize;

use super::eta::{decoherence_eta, DEFAULT_WEIGHT_THRESHOLD};
use crate::error::{Error, Result};
use crate::qcore::random::{random_pure_with, rng_from_seed};
use crate::qcore::{Basis, CompositeSpace, Evolution, StateVector, C64};

/// Splits `u`'s space into the leading system factors and the trailing
/// factors matching `e0`.
fn system_layout<E: Evolution + ?Sized>(u: &E, e0: &StateVector, basis: &Basis) -> Result<(CompositeSpace, Vec<usize>)> {
    let full = u.space().dims();
    let env = e0.space().dims();
    if env.len() >= full.len() || full[full.len() - env.len()..] != *env {
        return Err(Error::InvalidFactors(format!(
            "environment {} is not a trailing factor list of {}",
            e0.space(),
            u.space()
        )));
    }
    let ns = full.len() - env.len();
    let system: Vec<usize> = (0..ns).collect();
    let sspace = u.space().select(&system)?;
    if sspace.total() != basis.space().total() {
        return Err(Error::DimensionMismatch { context: "system basis", expected: sspace.total(), found: basis.space().total() });
    }
    Ok((sspace, system))
}

fn run<E: Evolution + ?Sized>(u: &E, e0: &StateVector, sspace: &CompositeSpace, psi_s: &StateVector) -> Result<StateVector> {
    let input = psi_s.reshape(sspace.clone())?.tensor(e0)?;
    u.evolve(&input)
}

/// For each basis vector `|A_i⟩`, `1 − ⟨A_i|ρ_S|A_i⟩` where `ρ_S` is the reduced
/// system state of `U|A_i⟩|e₀⟩`. Zero iff the vector is left in place.
pub fn conservation_defects<E: Evolution + ?Sized>(u: &E, e0: &StateVector, basis: &Basis) -> Result<Vec<f64>> {
    let (sspace, system) = system_layout(u, e0, basis)?;
    (0..basis.len())
        .map(|i| {
            let a = basis.vector(i).reshape(sspace.clone())?;
            let out = run(u, e0, &sspace, &a)?;
            let rho = out.reduced_density(&system)?;
            Ok((1.0 - rho.expectation(&a).re).max(0.0))
        })
        .collect()
}

pub fn is_conserved_basis<E: Evolution + ?Sized>(u: &E, e0: &StateVector, basis: &Basis, tol: f64) -> Result<bool> {
    Ok(conservation_defects(u, e0, basis)?.iter().all(|&d| d <= tol))
}

/// A probe state whose histories were not split.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeWitness {
    pub label: String,
    pub state: StateVector,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementProcessReport {
    /// Every probe ends up recorded in the basis.
    pub nonselective: bool,
    /// Nonselective and the basis is conserved.
    pub projective: bool,
    pub conserved: bool,
    pub worst_eta: f64,
    pub worst_conservation_defect: f64,
    pub probes: usize,
    pub witnesses: Vec<ProbeWitness>,
}

/// Basis vectors, equal-weight pairs `(|i⟩ + φ|j⟩)/√2` for `φ ∈ {1, −1, i, −i}`,
/// then `sample_count` Haar-random states.
pub fn probe_states(basis: &Basis, sample_count: usize, seed: u64) -> Vec<(String, StateVector)> {
    let mut probes = Vec::new();
    let n = basis.len();
    for i in 0..n {
        probes.push((format!("basis[{i}]"), basis.vector(i)));
    }
    let phases = [("+", C64::new(1.0, 0.0)), ("-", C64::new(-1.0, 0.0)), ("+i", C64::new(0.0, 1.0)), ("-i", C64::new(0.0, -1.0))];
    for i in 0..n {
        for j in i + 1..n {
            for (name, phase) in phases {
                let v = basis.matrix().column(i) + basis.matrix().column(j) * phase;
                let psi = StateVector::from_vector(v, basis.space().clone()).expect("orthogonal columns");
                probes.push((format!("pair[{i},{j}]{name}"), psi));
            }
        }
    }
    let mut rng = rng_from_seed(seed);
    for k in 0..sample_count {
        probes.push((format!("haar[{k}]"), random_pure_with(basis.space().clone(), &mut rng)));
    }
    probes
}

/// Probes whether `u` with environment initially in `e0` splits the histories
/// of every system state in `basis`.
pub fn is_measurement_process<E: Evolution + ?Sized>(
    u: &E,
    e0: &StateVector,
    basis: &Basis,
    tol: f64,
    sample_count: usize,
    seed: u64,
) -> Result<MeasurementProcessReport> {
    let (sspace, system) = system_layout(u, e0, basis)?;
    let probes = probe_states(basis, sample_count, seed);
    let mut witnesses = Vec::new();
    let mut worst_eta: f64 = 0.0;
    for (label, psi) in &probes {
        let out = run(u, e0, &sspace, psi)?;
        let eta = decoherence_eta(&out, &system, basis, DEFAULT_WEIGHT_THRESHOLD)?.eta;
        worst_eta = worst_eta.max(eta);
        if eta > tol {
            witnesses.push(ProbeWitness { label: label.clone(), state: psi.clone(), eta });
        }
    }
    let defects = conservation_defects(u, e0, basis)?;
    let worst_conservation_defect = defects.iter().copied().fold(0.0, f64::max);
    let nonselective = witnesses.is_empty();
    let conserved = worst_conservation_defect <= tol;
    Ok(MeasurementProcessReport {
        nonselective,
        projective: nonselective && conserved,
        conserved,
        worst_eta,
        worst_conservation_defect,
        probes: probes.len(),
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{cnot, up, up_x};
    use crate::qcore::Operator;

    #[test]
    fn cnot_is_projective_in_z() {
        let r = is_measurement_process(&cnot(), &up(), &Basis::z(), 1e-10, 32, 1).unwrap();
        assert!(r.nonselective && r.projective);
        assert!(is_conserved_basis(&cnot(), &up(), &Basis::z(), 1e-12).unwrap());
        assert!(!is_conserved_basis(&cnot(), &up(), &Basis::x(), 1e-6).unwrap());
    }

    #[test]
    fn identity_records_nothing() {
        let id = Operator::identity(CompositeSpace::qubits(2));
        let r = is_measurement_process(&id, &up(), &Basis::z(), 1e-10, 8, 1).unwrap();
        assert!(!r.nonselective && !r.projective);
        assert!(r.conserved);
        assert!(is_conserved_basis(&id, &up(), &Basis::x(), 1e-12).unwrap());
        // |↑ₓ⟩ is the equal-weight pair (|↑⟩ + |↓⟩)/√2.
        let w = r.witnesses.iter().find(|w| w.label == "pair[0,1]+").unwrap();
        assert!((w.state.fidelity(&up_x()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn environment_must_trail() {
        let id = Operator::identity(CompositeSpace::new(vec![2, 3]).unwrap());
        assert!(is_measurement_process(&id, &up(), &Basis::z(), 1e-10, 1, 1).is_err());
    }
}
