//! Standard one- and two-qubit operators and states (`|↑⟩ = |0⟩`, `|↓⟩ = |1⟩`).

use num_complex::Complex64 as C64;

use super::basis::Basis;
use super::operator::Operator;
use super::space::CompositeSpace;
use super::state::StateVector;
use crate::error::Result;

fn real(space: CompositeSpace, rows: &[&[f64]]) -> Operator {
    Operator::from_real_rows(space, rows).expect("well-formed constant")
}

pub fn sigma_x() -> Operator {
    real(CompositeSpace::single(2), &[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn sigma_y() -> Operator {
    Operator::from_fn(CompositeSpace::single(2), |i, j| match (i, j) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => C64::new(0.0, 0.0),
    })
}

pub fn sigma_z() -> Operator {
    real(CompositeSpace::single(2), &[&[1.0, 0.0], &[0.0, -1.0]])
}

pub fn hadamard() -> Operator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    real(CompositeSpace::single(2), &[&[s, s], &[s, -s]])
}

pub fn identity(d: usize) -> Operator {
    Operator::identity(CompositeSpace::single(d))
}

/// C-NOT with factor 0 as control.
pub fn cnot() -> Operator {
    real(
        CompositeSpace::qubits(2),
        &[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ],
    )
}

pub fn cz() -> Operator {
    Operator::diagonal(CompositeSpace::qubits(2), &[1.0, 1.0, 1.0, -1.0]).expect("4 entries")
}

pub fn swap() -> Operator {
    real(
        CompositeSpace::qubits(2),
        &[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ],
    )
}

/// `σ_a ⊗ 1 + 1 ⊗ σ_a` for a single-qubit Pauli `sigma`.
pub fn total_spin(sigma: &Operator) -> Operator {
    let id = identity(2);
    &sigma.tensor(&id) + &id.tensor(sigma)
}

pub fn total_jz() -> Operator {
    total_spin(&sigma_z())
}

pub fn total_jx() -> Operator {
    total_spin(&sigma_x())
}

/// Total spin squared `J² = ¼ Σ_a (σ_a⊗1 + 1⊗σ_a)²`: 0 on the singlet, 2 on the triplet.
pub fn total_j_squared() -> Operator {
    let mut acc = Operator::zeros(CompositeSpace::qubits(2));
    for s in [sigma_x(), sigma_y(), sigma_z()] {
        let j = total_spin(&s);
        acc = &acc + &(&j * &j);
    }
    acc.scale(C64::new(0.25, 0.0))
}

/// Cyclic shift `|k⟩ → |k+1 mod d⟩`.
pub fn shift(d: usize) -> Operator {
    Operator::from_fn(CompositeSpace::single(d), |i, j| {
        if i == (j + 1) % d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Unitary discrete Fourier transform `F[j,k] = e^{2πi jk/d}/√d`; column `k`
/// is the momentum eigenstate `|k⟩_p` of a `d`-site cyclic pointer.
pub fn dft(d: usize) -> Operator {
    let norm = 1.0 / (d as f64).sqrt();
    Operator::from_fn(CompositeSpace::single(d), |j, k| {
        C64::from_polar(norm, 2.0 * std::f64::consts::PI * ((j * k) % d) as f64 / d as f64)
    })
}

/// Conserved-basis recording coupling on `S ⊗ E`: `Σ_i |b_i⟩⟨b_i| ⊗ X^i`,
/// with `X` the cyclic shift of `E`. With `E` prepared in `|0⟩`, basis vector
/// `b_i` leaves the record `|i⟩` behind.
pub fn recording_coupling(basis: &Basis, env_dim: usize) -> Result<Operator> {
    let d = basis.len();
    if env_dim < d {
        return Err(crate::error::Error::InvalidParameter(format!(
            "environment dimension {env_dim} cannot hold {d} orthogonal records"
        )));
    }
    let env = CompositeSpace::single(env_dim);
    let x = shift(env_dim);
    let mut power = Operator::identity(env.clone());
    let mut acc = Operator::zeros(basis.space().concat(&env));
    for i in 0..d {
        let p = Operator::projector(&basis.vector(i));
        acc = &acc + &p.tensor(&power);
        power = &x * &power;
    }
    Ok(acc)
}

pub fn up() -> StateVector {
    StateVector::basis(CompositeSpace::single(2), 0)
}

pub fn down() -> StateVector {
    StateVector::basis(CompositeSpace::single(2), 1)
}

pub fn up_x() -> StateVector {
    StateVector::from_real(&[1.0, 1.0], CompositeSpace::single(2)).expect("nonzero")
}

pub fn down_x() -> StateVector {
    StateVector::from_real(&[1.0, -1.0], CompositeSpace::single(2)).expect("nonzero")
}

/// `(|↑↓⟩ − |↓↑⟩)/√2`.
pub fn singlet() -> StateVector {
    StateVector::from_real(&[0.0, 1.0, -1.0, 0.0], CompositeSpace::qubits(2)).expect("nonzero")
}

/// `(|↑↓⟩ + |↓↑⟩)/√2`.
pub fn triplet_zero() -> StateVector {
    StateVector::from_real(&[0.0, 1.0, 1.0, 0.0], CompositeSpace::qubits(2)).expect("nonzero")
}

/// `(|↑↑⟩, |↓↓⟩, T₀, S)`: the J² eigenbasis refined by J_z.
pub fn j_squared_basis() -> Basis {
    let uu = StateVector::basis(CompositeSpace::qubits(2), 0);
    let dd = StateVector::basis(CompositeSpace::qubits(2), 3);
    Basis::from_states(&[uu, dd, triplet_zero(), singlet()], "J2-eigenbasis").expect("orthonormal")
}

/// Bell basis `(Φ⁺, Φ⁻, Ψ⁺, Ψ⁻)`.
pub fn bell_basis() -> Basis {
    let s = CompositeSpace::qubits(2);
    let v = |a: [f64; 4]| StateVector::from_real(&a, s.clone()).expect("nonzero");
    Basis::from_states(
        &[
            v([1.0, 0.0, 0.0, 1.0]),
            v([1.0, 0.0, 0.0, -1.0]),
            v([0.0, 1.0, 1.0, 0.0]),
            v([0.0, 1.0, -1.0, 0.0]),
        ],
        "bell",
    )
    .expect("orthonormal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dft_is_unitary() {
        assert!(dft(5).is_unitary(1e-14));
    }

    #[test]
    fn j_squared_eigenvalues() {
        let j2 = total_j_squared();
        let s = singlet();
        let t = triplet_zero();
        assert!(j2.expectation(&s).norm() < 1e-14);
        assert!((j2.expectation(&t).re - 2.0).abs() < 1e-14);
        assert!(j2.is_hermitian(1e-14));
    }

    #[test]
    fn recording_coupling_is_unitary_and_records() {
        let u = recording_coupling(&Basis::x(), 3).unwrap();
        assert!(u.is_unitary(1e-14));
        let input = down_x().tensor(&StateVector::basis(CompositeSpace::single(3), 0)).unwrap();
        let out = input.apply(&u).unwrap();
        let expected = down_x().tensor(&StateVector::basis(CompositeSpace::single(3), 1)).unwrap();
        assert!((out.fidelity(&expected) - 1.0).abs() < 1e-14);
    }
}
