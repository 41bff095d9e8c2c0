//! Wigner's friend, with progressively more powerful Wigners.

use super::report::ScenarioReport;
use crate::error::{Error, Result};
use crate::measure::{nonselective_measure, selective_measure};
use crate::qcore::gates::{cnot, down_x, recording_coupling, up, up_x};
use crate::qcore::{Basis, Circuit, CompositeSpace, Evolution, Observable, Operator, StateVector, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct FriendParams {
    pub c1: C64,
    pub c2: C64,
    /// `|↑⟩ = α|↑_u⟩ + β|↓_u⟩`, `|↓⟩ = β̄|↑_u⟩ − ᾱ|↓_u⟩`.
    pub alpha: C64,
    pub beta: C64,
}

impl Default for FriendParams {
    fn default() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = std::f64::consts::FRAC_PI_8;
        Self { c1: C64::new(s, 0.0), c2: C64::new(s, 0.0), alpha: C64::new(a.cos(), 0.0), beta: C64::new(a.sin(), 0.0) }
    }
}

pub fn wigner_friend(variant: u8, params: &FriendParams, tol: f64) -> Result<ScenarioReport> {
    match variant {
        1 => isolated_spin(params, tol),
        2 => recombined_histories(tol),
        3 => room_measurement(tol),
        4 => position_flip(tol),
        v => Err(Error::InvalidParameter(format!("unknown Wigner's friend variant {v} (expected 1-4)"))),
    }
}

fn unit_pair(a: C64, b: C64, what: &str) -> Result<()> {
    let n = a.norm_sqr() + b.norm_sqr();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("{what}: squared moduli sum to {n}, expected 1")));
    }
    Ok(())
}

/// The friend records the spin along z; Wigner then measures the spin alone along u.
fn isolated_spin(p: &FriendParams, tol: f64) -> Result<ScenarioReport> {
    unit_pair(p.c1, p.c2, "c1, c2")?;
    unit_pair(p.alpha, p.beta, "alpha, beta")?;
    // Inverting the defining relations: |↑_u⟩ = ᾱ|↑⟩ + β|↓⟩, |↓_u⟩ = β̄|↑⟩ − α|↓⟩.
    let u_basis = Basis::qubit(p.alpha.conj(), p.beta, "u")?;
    let spin = StateVector::new(vec![p.c1, p.c2], CompositeSpace::single(2))?;
    let expected = (p.alpha * p.c1).norm_sqr() + (p.beta.conj() * p.c2).norm_sqr();

    // Wigner's description: spin, friend and Wigner's own record (S, F, W).
    let f0 = up();
    let w0 = StateVector::basis(CompositeSpace::single(2), 0);
    let global = Circuit::new(CompositeSpace::qubits(3))
        .then(cnot(), &[0, 1])?
        .then(recording_coupling(&u_basis, 2)?, &[0, 2])?
        .evolve(&StateVector::product(&[&spin, &f0, &w0])?)?;
    let p_wigner = global.reduced_density(&[2])?.matrix()[(0, 0)].re;

    // Friend's description: she sees ↑ or ↓ and collapses accordingly.
    let recorded = global_after_friend(&spin)?;
    let mut p_friend = 0.0;
    for k in 0..2 {
        let pk = Operator::projector(&StateVector::basis(CompositeSpace::single(2), k));
        if let Some((branch, w)) = recorded.project_local(&pk, &[1])? {
            p_friend += w * branch.reduced_density(&[0])?.expectation(&u_basis.vector(0)).re;
        }
    }

    let mut r = ScenarioReport::new("wigner_friend_1");
    r.expect("p_wigner_up_u", p_wigner, expected, tol);
    r.expect("p_friend_up_u", p_friend, expected, tol);
    r.expect(
        "p_wigner_down_u",
        1.0 - p_wigner,
        (p.beta * p.c1).norm_sqr() + (p.alpha.conj() * p.c2).norm_sqr(),
        tol,
    );
    Ok(r)
}

fn global_after_friend(spin: &StateVector) -> Result<StateVector> {
    spin.tensor(&up())?.apply(&cnot())
}

/// Wigner undoes the friend's measurement before measuring along x.
fn recombined_histories(tol: f64) -> Result<ScenarioReport> {
    let f0 = up();
    let start = up_x().tensor(&f0)?;
    let friend_measured = start.apply(&cnot())?;
    let undone = friend_measured.apply(&cnot().adjoint())?;

    let mut r = ScenarioReport::new("wigner_friend_2");
    let eta = crate::measure::decoherence_eta(&friend_measured, &[0], &Basis::z(), crate::measure::DEFAULT_WEIGHT_THRESHOLD)?.eta;
    r.expect("eta_z_after_friend", eta, 0.0, tol);
    r.expect("p_up_x", undone.reduced_density(&[0])?.expectation(&up_x()).re, 1.0, tol);
    r.expect("friend_memory_fidelity_f0", undone.reduced_density(&[1])?.expectation(&f0).re, 1.0, tol);
    Ok(r)
}

/// Wigner measures the whole room in the (Ψ₊, Ψ₋, …) basis without erasing the friend.
fn room_measurement(tol: f64) -> Result<ScenarioReport> {
    let s = CompositeSpace::qubits(2);
    let v = |a: [f64; 4]| StateVector::from_real(&a, s.clone());
    let psi_plus = v([1.0, 0.0, 0.0, 1.0])?;
    let room_basis = Basis::from_states(
        &[psi_plus.clone(), v([1.0, 0.0, 0.0, -1.0])?, v([0.0, 1.0, 1.0, 0.0])?, v([0.0, 1.0, -1.0, 0.0])?],
        "psi_pm",
    )?;
    let wigner_obs = Observable::basis_measurement(&room_basis);
    let room = global_after_friend(&up_x())?;

    // Wigner: Born rule on the uncollapsed room.
    let (post, p_wigner) = selective_measure(&room.density(), &wigner_obs, 0.0)?;
    // Friend: she believes the room collapsed to |↑F↑⟩ or |↓F↓⟩.
    let mut p_friend = 0.0;
    for k in [0usize, 3] {
        let collapsed = StateVector::basis(s.clone(), k);
        let weight = room.inner(&collapsed).norm_sqr();
        p_friend += weight * collapsed.inner(&psi_plus).norm_sqr();
    }

    let mut r = ScenarioReport::new("wigner_friend_3");
    r.expect("p_wigner_psi_plus", p_wigner, 1.0, tol);
    r.expect("p_friend_psi_plus", p_friend, 0.5, tol);
    r.expect("prediction_discrepancy", p_wigner - p_friend, 0.5, tol);
    r.expect("room_after_fidelity_psi_plus", post.expectation(&psi_plus).re, 1.0, tol);
    Ok(r)
}

/// Friend in position state |0⟩; Wigner measures in the ± basis, then looks.
fn position_flip(tol: f64) -> Result<ScenarioReport> {
    let zero = StateVector::basis(CompositeSpace::single(2), 0);
    let one = StateVector::basis(CompositeSpace::single(2), 1);
    let pm = Observable::basis_measurement(&Basis::x());

    // Wigner's route: the ± measurement as a nonselective channel.
    let after = nonselective_measure(&zero.density(), &pm)?;
    let p_wigner = after.expectation(&one).re;
    // Friend's route: enumerate the ± outcomes she may be found in.
    let p_friend: f64 = [up_x(), down_x()]
        .iter()
        .map(|b| zero.inner(b).norm_sqr() * b.inner(&one).norm_sqr())
        .sum();

    let mut r = ScenarioReport::new("wigner_friend_4");
    r.expect("p_wigner_one", p_wigner, 0.5, tol);
    r.expect("p_friend_one", p_friend, 0.5, tol);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_variants_pass() {
        for v in 1..=4 {
            let r = wigner_friend(v, &FriendParams::default(), 1e-12).unwrap();
            assert!(r.passed(), "variant {v}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn variant_one_with_complex_parameters() {
        let p = FriendParams {
            c1: C64::from_polar(0.6, 0.4),
            c2: C64::from_polar(0.8, -1.1),
            alpha: C64::from_polar(0.3f64.cos(), 0.9),
            beta: C64::from_polar(0.3f64.sin(), 2.0),
        };
        let r = wigner_friend(1, &p, 1e-12).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn unknown_variant() {
        assert!(wigner_friend(5, &FriendParams::default(), 1e-12).is_err());
    }
}
