//! Nonlocal spin measurements built from local pointer couplings.
//!
//! Each spin couples to a `d`-site cyclic pointer through
//! `exp(i(2π/d) σ_z ⊗ X̂)`, which shifts the pointer momentum by ±1. Two
//! pointers start in `Σ_q |q⟩|q⟩/√d` (total momentum 0), so after both local
//! couplings the total momentum holds `J_z` and nothing else.

use super::report::ScenarioReport;
use crate::error::{Error, Result};
use crate::measure::{conservation_defects, decoherence_eta, is_measurement_process, DEFAULT_WEIGHT_THRESHOLD};
use crate::qcore::gates::{dft, hadamard, j_squared_basis, sigma_x, sigma_z, singlet, total_j_squared, total_jz};
use crate::qcore::random::random_unitary;
use crate::qcore::{spectral_decomposition, Circuit, CompositeSpace, Evolution, Operator, StateVector, C64, DEFAULT_CLUSTER_TOL};
use crate::relcheck::{signaling_game, Channel};
use crate::seed::derive_seed;

pub fn check_pointer_dim(d: usize) -> Result<()> {
    if d < 5 || d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("pointer dimension must be odd and at least 5, got {d}")));
    }
    Ok(())
}

/// `exp(i(2π/d) σ_z ⊗ X̂)` on `(spin, pointer)`.
pub fn pointer_coupling(d: usize) -> Operator {
    let space = CompositeSpace::new(vec![2, d]).expect("positive dims");
    Operator::from_fn(space, |i, j| {
        if i != j {
            return C64::new(0.0, 0.0);
        }
        let (s, q) = (i / d, i % d);
        let sz = if s == 0 { 1.0 } else { -1.0 };
        C64::from_polar(1.0, 2.0 * std::f64::consts::PI * sz * q as f64 / d as f64)
    })
}

/// The same coupling with the spin read along x: `(H⊗1) C (H⊗1)`.
pub fn pointer_coupling_x(d: usize) -> Operator {
    let h = hadamard().tensor(&Operator::identity(CompositeSpace::single(d)));
    &(&h * &pointer_coupling(d)) * &h
}

/// `Σ_q |q⟩|q⟩/√d`.
pub fn pointer_pair(d: usize) -> StateVector {
    let space = CompositeSpace::new(vec![d, d]).expect("positive dims");
    let amps: Vec<C64> = (0..d * d).map(|i| if i / d == i % d { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect();
    StateVector::new(amps, space).expect("nonzero")
}

/// Signed representative of `k mod d` in `[−(d−1)/2, (d−1)/2]`.
fn signed(k: usize, d: usize) -> i64 {
    if k <= (d - 1) / 2 {
        k as i64
    } else {
        k as i64 - d as i64
    }
}

/// Distribution of the total pointer momentum `(k₁ + k₂) mod d`, indexed by
/// signed value from `−(d−1)/2` upwards.
pub fn total_momentum_distribution(psi: &StateVector, p1: usize, p2: usize, d: usize) -> Result<Vec<(i64, f64)>> {
    let f_inv = dft(d).adjoint();
    let momentum = psi.apply_local(&f_inv, &[p1])?.apply_local(&f_inv, &[p2])?;
    let rho = momentum.reduced_density(&[p1, p2])?;
    let mut dist = vec![0.0; d];
    for k1 in 0..d {
        for k2 in 0..d {
            dist[(k1 + k2) % d] += rho.matrix()[(k1 * d + k2, k1 * d + k2)].re;
        }
    }
    let mut out: Vec<(i64, f64)> = dist.into_iter().enumerate().map(|(k, p)| (signed(k, d), p)).collect();
    out.sort_by_key(|&(j, _)| j);
    Ok(out)
}

/// Named two-spin states: `uu`, `ud`, `du`, `dd`, `singlet`, `triplet0`,
/// `phi_plus`, `phi_minus`, or `random:SEED`.
pub fn two_spin_state(name: &str) -> Result<StateVector> {
    let s = CompositeSpace::qubits(2);
    let v = |a: [f64; 4]| StateVector::from_real(&a, s.clone());
    match name {
        "uu" => v([1.0, 0.0, 0.0, 0.0]),
        "ud" => v([0.0, 1.0, 0.0, 0.0]),
        "du" => v([0.0, 0.0, 1.0, 0.0]),
        "dd" => v([0.0, 0.0, 0.0, 1.0]),
        "singlet" => v([0.0, 1.0, -1.0, 0.0]),
        "triplet0" => v([0.0, 1.0, 1.0, 0.0]),
        "phi_plus" => v([1.0, 0.0, 0.0, 1.0]),
        "phi_minus" => v([1.0, 0.0, 0.0, -1.0]),
        other => match other.strip_prefix("random:").map(str::parse::<u64>) {
            Some(Ok(seed)) => Ok(crate::qcore::random_pure(s, seed)),
            _ => Err(Error::InvalidParameter(format!(
                "unknown two-spin state {other:?} (uu, ud, du, dd, singlet, triplet0, phi_plus, phi_minus, random:SEED)"
            ))),
        },
    }
}

/// Layout `(s₁, s₂, p₁, p₂)`: one local coupling per side.
fn jz_circuit(d: usize) -> Result<Circuit> {
    let space = CompositeSpace::new(vec![2, 2, d, d])?;
    Circuit::new(space).then(pointer_coupling(d), &[0, 2])?.then(pointer_coupling(d), &[1, 3])
}

/// Layout `(s₁, s₂, pa₁, pa₂, pb₁, pb₂)`: the x-read pair `pa` first, then
/// the z-read pair `pb`. Returns the circuit and the pointers' initial state.
pub fn jx_then_jz(d: usize) -> Result<(Circuit, StateVector)> {
    check_pointer_dim(d)?;
    let space = CompositeSpace::new(vec![2, 2, d, d, d, d])?;
    let circuit = Circuit::new(space)
        .then(pointer_coupling_x(d), &[0, 2])?
        .then(pointer_coupling_x(d), &[1, 3])?
        .then(pointer_coupling(d), &[0, 4])?
        .then(pointer_coupling(d), &[1, 5])?;
    let e0 = pointer_pair(d).tensor(&pointer_pair(d))?;
    Ok((circuit, e0))
}

fn check_two_spin(initial: &StateVector) -> Result<()> {
    if initial.space().dims() != [2, 2] {
        return Err(Error::InvalidFactors(format!("expected a two-spin state, found {}", initial.space())));
    }
    Ok(())
}

/// Nonlocal `J_z` measurement by two local pointer couplings.
pub fn aharonov_albert_jz(initial: &StateVector, d: usize, seed: u64, tol: f64) -> Result<ScenarioReport> {
    check_pointer_dim(d)?;
    check_two_spin(initial)?;
    let circuit = jz_circuit(d)?;
    let start = initial.tensor(&pointer_pair(d))?;
    let out = circuit.evolve(&start)?;

    let mut r = ScenarioReport::new("aharonov_albert_jz");
    let jz = spectral_decomposition(&total_jz(), DEFAULT_CLUSTER_TOL)?;
    let rho0 = initial.density();
    let born: Vec<(f64, f64)> = crate::measure::outcome_probabilities(&rho0, &jz)?;
    for (j, p) in total_momentum_distribution(&out, 2, 3, d)? {
        let expected = born.iter().find(|(x, _)| (*x - j as f64).abs() < 0.5).map_or(0.0, |(_, p)| *p);
        r.expect(format!("p_shift[{j:+}]"), p, expected, tol);
    }

    // The spins keep exactly the J_z-dephased state: coherence survives inside each eigenspace.
    let spins = out.reduced_density(&[0, 1])?;
    let dephased = crate::measure::nonselective_measure(&rho0, &jz)?;
    r.expect("spin_state_minus_jz_dephased", (&spins - &dephased).max_abs(), 0.0, tol);
    if born.iter().any(|(_, p)| *p > 1.0 - 1e-12) {
        r.expect("spin_coherence_fidelity", spins.expectation(initial).re, 1.0, tol.max(1e-10));
    }

    // Alice rotates spin 1 before the coupling; Bob holds spin 2 and pointer 2.
    let w = random_unitary(CompositeSpace::single(2), derive_seed(seed, "aharonov_albert_jz/alice"));
    let out_w = circuit.evolve(&start.apply_local(&w, &[0])?)?;
    let shift = (&out_w.reduced_density(&[1, 3])? - &out.reduced_density(&[1, 3])?).trace_norm();
    r.expect("bob_marginal_shift", shift, 0.0, tol.max(1e-10));
    Ok(r)
}

/// Probe-based check that `J_x` then `J_z` splits histories in the J²
/// eigenbasis without conserving it.
pub fn jx_then_jz_split(initial: &StateVector, d: usize, sample_count: usize, seed: u64, tol: f64) -> Result<ScenarioReport> {
    check_two_spin(initial)?;
    let (circuit, e0) = jx_then_jz(d)?;
    let basis = j_squared_basis();
    let out = circuit.evolve(&initial.tensor(&e0)?)?;
    let mut r = ScenarioReport::new("jx_then_jz_split");

    let eta = decoherence_eta(&out, &[0, 1], &basis, DEFAULT_WEIGHT_THRESHOLD)?.eta;
    r.expect("eta_initial_state", eta, 0.0, tol.max(1e-10));
    let spins = out.reduced_density(&[0, 1])?;
    let fidelity = spins.expectation(initial).re;
    r.observe("final_spin_fidelity_to_initial", fidelity);
    if initial.fidelity(&singlet()) > 1.0 - 1e-12 {
        r.expect("singlet_final_fidelity", fidelity, 1.0, tol.max(1e-10));
    }

    let process = is_measurement_process(&circuit, &e0, &basis, tol.max(1e-10), sample_count, derive_seed(seed, "jx_then_jz/probes"))?;
    r.expect("probe_worst_eta", process.worst_eta, 0.0, tol.max(1e-10));
    r.expect("nonselective", f64::from(u8::from(process.nonselective)), 1.0, 0.0);
    r.expect("projective", f64::from(u8::from(process.projective)), 0.0, 0.0);
    r.observe("probe_count", process.probes as f64);

    let defects = conservation_defects(&circuit, &e0, &basis)?;
    r.expect("conservation_defect_singlet", defects[3], 0.0, tol.max(1e-10));
    r.expect_at_least("conservation_defect_up_up", defects[0], 1e-3);
    r.observe("conservation_defect_down_down", defects[1]);
    r.observe("conservation_defect_triplet0", defects[2]);
    Ok(r)
}

/// Bob's reduced state (spin 2 and both of its pointers) after the local
/// `J_x`-then-`J_z` channel, with Alice's bit applied as σ_x on spin 1.
pub fn local_channel_bob_state(bit: bool, d: usize) -> Result<Operator> {
    let (circuit, e0) = jx_then_jz(d)?;
    let mut spins = two_spin_state("uu")?;
    if bit {
        spins = spins.apply_local(&sigma_x(), &[0])?;
    }
    circuit.evolve(&spins.tensor(&e0)?)?.reduced_density(&[1, 3, 5])
}

#[derive(Debug, Clone, PartialEq)]
pub struct JsqParams {
    pub n_pairs: usize,
    pub n_rounds: usize,
    pub pointer_dim: usize,
    pub seed: u64,
}

impl Default for JsqParams {
    fn default() -> Self {
        Self { n_pairs: 100, n_rounds: 2000, pointer_dim: 5, seed: 0 }
    }
}

/// Channels of the hypothetical signaling protocol: Alice flips spin 1 or not,
/// then an ideal J² measurement acts on the pair.
pub fn jsq_channels() -> Result<(Channel, Channel)> {
    let j2 = spectral_decomposition(&total_j_squared(), DEFAULT_CLUSTER_TOL)?;
    let bit0 = Channel::identity().nonselective(j2.clone(), &[0, 1]);
    let bit1 = Channel::identity().unitary(sigma_x(), &[0]).nonselective(j2, &[0, 1]);
    Ok((bit0, bit1))
}

pub fn jsq_signaling(p: &JsqParams, tol: f64) -> Result<ScenarioReport> {
    let (bit0, bit1) = jsq_channels()?;
    let rho0 = two_spin_state("uu")?.density();
    let bob_z = spectral_decomposition(&sigma_z(), DEFAULT_CLUSTER_TOL)?;
    let game = signaling_game(&bit0, &bit1, &bob_z, &[1], &rho0, p.n_pairs, p.n_rounds, derive_seed(p.seed, "jsq_signaling/game"))?;

    let mut r = ScenarioReport::new("jsq_signaling");
    // Eigenvalue order is ascending: index 1 is σ_z = +1.
    r.expect("bob_p_up_bit0", game.bob_distributions[0][1], 1.0, tol);
    r.expect("bob_p_up_bit1", game.bob_distributions[1][1], 0.5, tol);
    r.expect("tv_distance", game.tv_distance, 0.5, tol);
    r.expect_at_most("empirical_error", game.empirical_error, 0.01, 0.0);
    for n in [1usize, 2, 4, 8, 16] {
        let g = signaling_game(&bit0, &bit1, &bob_z, &[1], &rho0, n, p.n_rounds, derive_seed(p.seed, &format!("jsq_signaling/curve/{n}")))?;
        r.observe(format!("error_curve[n_pairs={n:03}]"), g.empirical_error);
    }

    let local0 = local_channel_bob_state(false, p.pointer_dim)?;
    let local1 = local_channel_bob_state(true, p.pointer_dim)?;
    r.expect("local_channel_bob_marginal_distance", (&local0 - &local1).trace_norm(), 0.0, tol.max(1e-10));
    Ok(r)
}
