//! The decoherence measure η and the "recorded" predicate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{Basis, StateVector};

/// Weights `c_i` at or below this are treated as absent branches.
pub const DEFAULT_WEIGHT_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairOverlap {
    pub i: usize,
    pub j: usize,
    pub overlap: f64,
}

/// Result of [`decoherence_eta`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaReport {
    pub eta: f64,
    pub basis_label: String,
    /// `c_i = ‖(⟨i| ⊗ 1)|ψ⟩‖` for every basis vector.
    pub weights: Vec<f64>,
    /// `|⟨E_i|E_j⟩|` of the normalized environment states, for `i < j` with
    /// both weights above the threshold.
    pub pairwise_overlaps: Vec<PairOverlap>,
    pub weight_threshold: f64,
}

fn check_system(psi: &StateVector, system: &[usize], basis: &Basis) -> Result<()> {
    psi.space().check_factors(system)?;
    let d = psi.space().select(system)?.total();
    if d != basis.space().total() {
        return Err(Error::DimensionMismatch { context: "system basis", expected: d, found: basis.space().total() });
    }
    Ok(())
}

/// η of `psi` with respect to `basis` on the `system` factors; every other
/// factor is environment.
pub fn decoherence_eta(psi: &StateVector, system: &[usize], basis: &Basis, weight_threshold: f64) -> Result<EtaReport> {
    check_system(psi, system, basis)?;
    // Row i holds the unnormalized environment state (⟨b_i| ⊗ 1)|ψ⟩.
    let env = basis.matrix().adjoint() * psi.bipartite_matrix(system)?;
    let weights: Vec<f64> = env.row_iter().map(|r| r.norm()).collect();
    let alive: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > weight_threshold).collect();
    let mut pairwise_overlaps = Vec::new();
    let mut eta: f64 = 0.0;
    for (a, &i) in alive.iter().enumerate() {
        for &j in &alive[a + 1..] {
            let inner = env.row(i).conjugate().dot(&env.row(j));
            let overlap = (inner.norm() / (weights[i] * weights[j])).min(1.0);
            eta = eta.max(overlap);
            pairwise_overlaps.push(PairOverlap { i, j, overlap });
        }
    }
    Ok(EtaReport {
        eta,
        basis_label: basis.label().to_string(),
        weights,
        pairwise_overlaps,
        weight_threshold,
    })
}

/// The histories of `psi` are split in `basis`: η ≤ `tol`.
pub fn is_recorded(psi: &StateVector, system: &[usize], basis: &Basis, tol: f64) -> Result<bool> {
    Ok(decoherence_eta(psi, system, basis, DEFAULT_WEIGHT_THRESHOLD)?.eta <= tol)
}

/// Largest off-diagonal modulus of the reduced system state written in `basis`.
pub fn offdiagonal_in(psi: &StateVector, system: &[usize], basis: &Basis) -> Result<f64> {
    check_system(psi, system, basis)?;
    let rho = psi.reduced_density(system)?;
    let m = basis.represent(&rho);
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    Ok(worst)
}

/// Reduced system state diagonal in `basis` within `tol`.
pub fn is_diagonal_in(psi: &StateVector, system: &[usize], basis: &Basis, tol: f64) -> Result<bool> {
    Ok(offdiagonal_in(psi, system, basis)? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{cnot, up, up_x};
    use crate::qcore::CompositeSpace;

    fn bell() -> StateVector {
        StateVector::from_real(&[1.0, 0.0, 0.0, 1.0], CompositeSpace::qubits(2)).unwrap()
    }

    #[test]
    fn perfect_decoherence() {
        let r = decoherence_eta(&bell(), &[0], &Basis::z(), DEFAULT_WEIGHT_THRESHOLD).unwrap();
        assert_eq!(r.eta, 0.0);
        assert_eq!(r.pairwise_overlaps.len(), 1);
        assert!(is_recorded(&bell(), &[0], &Basis::z(), 1e-12).unwrap());
    }

    #[test]
    fn unentangled_superposition_has_eta_one() {
        let psi = up_x().tensor(&up()).unwrap();
        let r = decoherence_eta(&psi, &[0], &Basis::z(), DEFAULT_WEIGHT_THRESHOLD).unwrap();
        assert!((r.eta - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_branch_convention() {
        let psi = up().tensor(&up_x()).unwrap();
        let r = decoherence_eta(&psi, &[0], &Basis::z(), DEFAULT_WEIGHT_THRESHOLD).unwrap();
        assert_eq!(r.eta, 0.0);
        assert!(r.pairwise_overlaps.is_empty());
    }

    #[test]
    fn cnot_record_is_basis_specific() {
        let psi = up_x().tensor(&up()).unwrap().apply(&cnot()).unwrap();
        assert!(is_recorded(&psi, &[0], &Basis::z(), 1e-12).unwrap());
        // (|↑↑⟩+|↓↓⟩)/√2 = (|++⟩+|−−⟩)/√2 is recorded in the x basis as well.
        assert!(is_recorded(&psi, &[0], &Basis::x(), 1e-12).unwrap());

        // Unequal weights break the symmetry: cos a|↑↑⟩ + sin a|↓↓⟩ has
        // E_± ∝ cos a|↑⟩ ± sin a|↓⟩, overlap |cos²a − sin²a| = |cos 2a|.
        let a: f64 = 0.3;
        let psi = StateVector::from_real(&[a.cos(), 0.0, 0.0, a.sin()], CompositeSpace::qubits(2)).unwrap();
        assert!(is_recorded(&psi, &[0], &Basis::z(), 1e-12).unwrap());
        let r = decoherence_eta(&psi, &[0], &Basis::x(), DEFAULT_WEIGHT_THRESHOLD).unwrap();
        assert!((r.eta - (2.0 * a).cos()).abs() < 1e-14);
        assert!(!is_diagonal_in(&psi, &[0], &Basis::x(), 1e-6).unwrap());
    }

    #[test]
    fn system_basis_dimension_checked() {
        assert!(decoherence_eta(&bell(), &[0, 1], &Basis::z(), 1e-9).is_err());
    }
}
