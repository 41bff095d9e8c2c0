//! Selective (collapse) and non-selective (dephasing) measurement updates.

use crate::error::{Error, Result};
use crate::qcore::{Observable, Operator};

/// Distance within which a requested outcome is matched to an eigenvalue.
pub const OUTCOME_TOL: f64 = 1e-8;

/// Born probabilities at or below this are treated as impossible outcomes.
pub const IMPOSSIBLE_BELOW: f64 = 1e-14;

fn check_spaces(rho: &Operator, obs: &Observable) -> Result<()> {
    if rho.dim() != obs.space().total() {
        return Err(Error::DimensionMismatch { context: "measurement", expected: rho.dim(), found: obs.space().total() });
    }
    Ok(())
}

/// Collapse on `outcome`: returns `Π ρ Π / tr(ρΠ)` and `tr(ρΠ)`.
pub fn selective_measure(rho: &Operator, obs: &Observable, outcome: f64) -> Result<(Operator, f64)> {
    check_spaces(rho, obs)?;
    let pi = obs.projector_for(outcome, OUTCOME_TOL).ok_or(Error::UnknownOutcome { value: outcome })?;
    let pi = pi.clone().with_space(rho.space().clone())?;
    let projected = &(&pi * rho) * &pi;
    let probability = projected.trace().re;
    if probability <= IMPOSSIBLE_BELOW {
        return Err(Error::ImpossibleOutcome { outcome, probability });
    }
    Ok((projected.scale((1.0 / probability).into()), probability))
}

/// `Σ_x Π_x ρ Π_x`.
pub fn nonselective_measure(rho: &Operator, obs: &Observable) -> Result<Operator> {
    check_spaces(rho, obs)?;
    let mut acc = Operator::zeros(rho.space().clone());
    for c in obs.spectrum() {
        let pi = c.projector.clone().with_space(rho.space().clone())?;
        acc = &acc + &(&(&pi * rho) * &pi);
    }
    Ok(acc)
}

/// `(eigenvalue, tr(ρ Π_x))` for every eigenvalue, ascending.
pub fn outcome_probabilities(rho: &Operator, obs: &Observable) -> Result<Vec<(f64, f64)>> {
    check_spaces(rho, obs)?;
    Ok(obs
        .spectrum()
        .iter()
        .map(|c| (c.eigenvalue, (rho.matrix().component_mul(&c.projector.matrix().transpose())).sum().re))
        .collect())
}
