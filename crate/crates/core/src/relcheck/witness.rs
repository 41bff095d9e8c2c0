//! Empirical side of "(MC) implies (F)": a non-product unitary must let some
//! Alice-side measurement move Bob's marginal.

use serde::Serialize;

use super::factorize::factorize_unitary;
use super::nosignal::{check_mc, ViolationReport};
use crate::error::{Error, Result};
use crate::qcore::random::{random_density_with, random_pure_with, rng_from_seed};
use crate::qcore::{CompositeSpace, Observable, Operator};

/// Factorization residual below which a unitary counts as a product.
pub const FACTORIZED_BELOW: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSearch {
    pub factorized: bool,
    pub residual: f64,
    /// Largest violation found over the trials; absent for products.
    pub witness: Option<ViolationReport>,
    pub trials: usize,
}

/// Factorizes `u`; if it is not a product, samples `trials` pairs of a
/// Haar-random full-rank `ρ` and a random rank-one projective Alice
/// observable, and returns the largest (MC) violation.
pub fn mc_implies_f_witness(u: &Operator, d1: usize, d2: usize, trials: usize, seed: u64) -> Result<WitnessSearch> {
    let f = factorize_unitary(u, d1, d2)?;
    if f.residual < FACTORIZED_BELOW {
        return Ok(WitnessSearch { factorized: true, residual: f.residual, witness: None, trials: 0 });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("witness search needs at least one trial".into()));
    }
    let space = CompositeSpace::new(vec![d1, d2])?;
    let u = u.clone().with_space(space.clone())?;
    let mut rng = rng_from_seed(seed);
    let mut best: Option<ViolationReport> = None;
    for _ in 0..trials {
        let rho = random_density_with(space.clone(), space.total(), &mut rng)?;
        let phi = random_pure_with(CompositeSpace::single(d1), &mut rng);
        let obs = Observable::from_projector(&Operator::projector(&phi))?;
        let report = check_mc(&u, &obs, &rho)?;
        if best.as_ref().is_none_or(|b| report.magnitude > b.magnitude) {
            best = Some(report);
        }
    }
    Ok(WitnessSearch { factorized: false, residual: f.residual, witness: best, trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{cnot, swap};
    use crate::qcore::random_unitary;

    #[test]
    fn swap_signals() {
        let w = mc_implies_f_witness(&swap(), 2, 2, 100, 5).unwrap();
        assert!(!w.factorized);
        assert!(w.witness.unwrap().magnitude > 0.2);
    }

    #[test]
    fn cnot_signals() {
        let w = mc_implies_f_witness(&cnot(), 2, 2, 100, 5).unwrap();
        assert!(!w.factorized);
        assert!(w.witness.unwrap().magnitude > 0.0);
    }

    #[test]
    fn product_is_recognized() {
        let u = random_unitary(CompositeSpace::single(2), 1).tensor(&random_unitary(CompositeSpace::single(3), 2));
        let w = mc_implies_f_witness(&u, 2, 3, 10, 5).unwrap();
        assert!(w.factorized && w.witness.is_none());
    }
}
