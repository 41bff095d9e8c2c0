//! An entangled pair whose halves are recorded by two separate environments.

use nalgebra::DMatrix;

use super::chsh::chsh_max;
use super::report::{BranchInfo, ScenarioReport};
use crate::error::{Error, Result};
use crate::qcore::gates::{recording_coupling, sigma_y};
use crate::qcore::{Basis, Circuit, CompositeSpace, Evolution, Operator, StateVector, C64};

/// Relative singular value below which a Schmidt coefficient counts as zero.
pub const SCHMIDT_TOL: f64 = 1e-9;

/// Branches lighter than this are not reported.
pub const BRANCH_WEIGHT_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct BellRecordingParams {
    pub c1: C64,
    pub c2: C64,
    pub basis_b: Basis,
    pub basis_b2: Basis,
    pub env_dim: usize,
    /// Nonzero: each coupling is followed by `exp(−iθσ_y)` on the recorded
    /// spin, so the bases are no longer conserved. Only observations are reported.
    pub nonconserved_angle: f64,
}

impl Default for BellRecordingParams {
    fn default() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            c1: C64::new(s, 0.0),
            c2: C64::new(s, 0.0),
            basis_b: Basis::z(),
            basis_b2: Basis::z(),
            env_dim: 2,
            nonconserved_angle: 0.0,
        }
    }
}

/// Re-expresses a qubit basis as `(α|↑⟩+β|↓⟩, β̄|↑⟩−ᾱ|↓⟩)` from its first
/// vector; only the phase of the second vector can change.
fn canonical(basis: &Basis) -> Result<(Basis, C64, C64)> {
    if basis.len() != 2 {
        return Err(Error::InvalidParameter(format!("recording basis {} is not a qubit basis", basis.label())));
    }
    let (a, b) = (basis.matrix()[(0, 0)], basis.matrix()[(1, 0)]);
    Ok((Basis::qubit(a, b, basis.label())?, a, b))
}

fn rotation_y(theta: f64) -> Operator {
    // exp(−iθσ_y) = cos θ − i sin θ σ_y
    let id = Operator::identity(CompositeSpace::single(2));
    &id.scale(theta.cos().into()) - &sigma_y().scale(C64::new(0.0, theta.sin()))
}

/// Factor order `(E, S₁, S₂, E')`; both environments start in `|0⟩` and the
/// record of basis vector `i` is `|i⟩`.
pub fn bell_recording(p: &BellRecordingParams, tol: f64) -> Result<ScenarioReport> {
    let norm = p.c1.norm_sqr() + p.c2.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("|c1|²+|c2|² = {norm}, expected 1")));
    }
    let (b, al, be) = canonical(&p.basis_b)?;
    let (b2, al2, be2) = canonical(&p.basis_b2)?;
    let de = p.env_dim;
    let pair_space = CompositeSpace::qubits(2);
    let pair = StateVector::new(vec![0.0.into(), p.c1, p.c2, 0.0.into()], pair_space.clone())?;
    let env0 = StateVector::basis(CompositeSpace::single(de), 0);
    let psi0 = StateVector::product(&[&env0, &pair, &env0])?;
    let space = psi0.space().clone();

    let mut circuit = Circuit::new(space);
    circuit.push(recording_coupling(&b, de)?, &[1, 0])?;
    if p.nonconserved_angle != 0.0 {
        circuit.push(rotation_y(p.nonconserved_angle), &[1])?;
    }
    circuit.push(recording_coupling(&b2, de)?, &[2, 3])?;
    if p.nonconserved_angle != 0.0 {
        circuit.push(rotation_y(p.nonconserved_angle), &[2])?;
    }
    let psi = circuit.evolve(&psi0)?;
    let conserved = p.nonconserved_angle == 0.0;

    let mut report = ScenarioReport::new("bell_recording");

    // Amplitude tensor ψ[e, s1, s2, e'] read through the recording bases.
    let amp = |e: usize, s1: usize, s2: usize, e2: usize| psi.amplitudes()[((e * 2 + s1) * 2 + s2) * de + e2];
    let mut branches = Vec::new();
    let mut coefficient_weight = 0.0;
    let names = ["up", "down"];
    let expected_coeffs = [
        [p.c1 * al.conj() * be2.conj() + p.c2 * be.conj() * al2.conj(), -p.c1 * al.conj() * al2 + p.c2 * be.conj() * be2],
        [p.c1 * be * be2.conj() - p.c2 * al * al2.conj(), -p.c1 * be * al2 - p.c2 * al * be2],
    ];
    for i in 0..de {
        for j in 0..de {
            let m = DMatrix::from_fn(2, 2, |s1, s2| amp(i, s1, s2, j));
            let weight = m.norm_squared();
            if i < 2 && j < 2 && conserved {
                // ⟨E_i, b_i, b'_j, E'_j | ψ⟩
                let bi = b.matrix().column(i);
                let bj = b2.matrix().column(j);
                let c = (bi.adjoint() * &m * bj.conjugate())[(0, 0)];
                coefficient_weight += c.norm_sqr();
                let label = format!("coefficient_{}_{}", names[i], names[j]);
                report.expect(format!("{label}.re"), c.re, expected_coeffs[i][j].re, tol);
                report.expect(format!("{label}.im"), c.im, expected_coeffs[i][j].im, tol);
            }
            if weight <= BRANCH_WEIGHT_FLOOR {
                continue;
            }
            let sv = crate::qcore::linalg::singular_values(&m);
            let top = sv[0];
            let rank = sv.iter().filter(|&&s| s > SCHMIDT_TOL * top).count();
            branches.push(BranchInfo { label: format!("E{i}E'{j}"), weight, schmidt_rank: rank, product: rank == 1 });
        }
    }
    if conserved {
        report.expect("weight_outside_expansion", (1.0 - coefficient_weight).abs(), 0.0, tol);
        for br in &branches {
            report.expect(format!("branch_{}_schmidt_rank", br.label), br.schmidt_rank as f64, 1.0, 0.0);
        }
    } else {
        for br in &branches {
            report.observe(format!("branch_{}_schmidt_rank", br.label), br.schmidt_rank as f64);
        }
    }
    report.observe("branch_count", branches.len() as f64);

    let before = chsh_max(&pair.density())?.value;
    // Closed form for pure states c1|↑↓⟩ + c2|↓↑⟩.
    let tsirelson = 2.0 * (1.0 + 4.0 * (p.c1 * p.c2).norm_sqr()).sqrt();
    report.expect("chsh_before", before, tsirelson, 1e-6);
    let after = chsh_max(&psi.reduced_density(&[1, 2])?.with_space(pair_space)?)?.value;
    if conserved {
        report.expect_at_most("chsh_after", after, 2.0, 1e-9);
    } else {
        report.observe("chsh_after", after);
    }
    report.branch_data = Some(branches);
    Ok(report)
}
