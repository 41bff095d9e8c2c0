//! Conditions (MC) and (C) as trace-norm distances between Bob's marginals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::nonselective_measure;
use crate::qcore::{Observable, Operator};

/// How far an Alice-side operation moves Bob's reduced state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    /// `‖ρ_B' − ρ_B‖₁`, between 0 and 2.
    pub magnitude: f64,
    pub witness_state: Operator,
    pub witness_observable: Operator,
    pub witness_unitary: Operator,
}

fn check_bipartite(u: &Operator, rho: &Operator) -> Result<(usize, usize)> {
    let dims = u.space().dims();
    if dims.len() != 2 {
        return Err(Error::InvalidFactors(format!("expected a bipartite space, found {}", u.space())));
    }
    if rho.space() != u.space() {
        return Err(Error::DimensionMismatch { context: "state vs unitary", expected: u.dim(), found: rho.dim() });
    }
    Ok((dims[0], dims[1]))
}

/// `tr₁(U ρ U†)`.
pub fn bob_marginal(u: &Operator, rho: &Operator) -> Result<Operator> {
    rho.conjugate_by(u)?.partial_trace(&[1])
}

/// Trace-norm distance between `tr₁(U (Σ_x Π_x⊗1 ρ Π_x⊗1) U†)` and `tr₁(U ρ U†)`.
pub fn check_mc(u: &Operator, obs_a: &Observable, rho: &Operator) -> Result<ViolationReport> {
    let (d1, _) = check_bipartite(u, rho)?;
    if obs_a.space().total() != d1 {
        return Err(Error::DimensionMismatch { context: "Alice observable", expected: d1, found: obs_a.space().total() });
    }
    let lifted = obs_a.embed(u.space(), &[0])?;
    let measured = nonselective_measure(rho, &lifted)?;
    let diff = &bob_marginal(u, &measured)? - &bob_marginal(u, rho)?;
    Ok(ViolationReport {
        magnitude: diff.trace_norm(),
        witness_state: rho.clone(),
        witness_observable: obs_a.operator().clone(),
        witness_unitary: u.clone(),
    })
}

/// Condition (C): Alice's subsystem first interacts with an environment `E`
/// through `v` on `E ⊗ H₁`, then `u` acts on `H₁ ⊗ H₂`.
pub fn check_c(v: &Operator, u: &Operator, rho: &Operator, rho_e: &Operator) -> Result<ViolationReport> {
    let (d1, _) = check_bipartite(u, rho)?;
    let de = rho_e.dim();
    if v.dim() != de * d1 {
        return Err(Error::DimensionMismatch { context: "environment coupling", expected: de * d1, found: v.dim() });
    }
    let full = rho_e.space().concat(rho.space());
    let ne = rho_e.space().num_factors();
    let v_factors: Vec<usize> = (0..=ne).collect();
    let v_full = v.clone().with_space(rho_e.space().concat(&u.space().select(&[0])?))?.embed(&full, &v_factors)?;
    let joint = rho_e.tensor(rho).with_space(full)?.conjugate_by(&v_full)?;
    let after = joint.partial_trace(&[ne, ne + 1])?.with_space(rho.space().clone())?;
    let diff = &bob_marginal(u, &after)? - &bob_marginal(u, rho)?;
    Ok(ViolationReport {
        magnitude: diff.trace_norm(),
        witness_state: rho.clone(),
        witness_observable: v.clone(),
        witness_unitary: u.clone(),
    })
}
