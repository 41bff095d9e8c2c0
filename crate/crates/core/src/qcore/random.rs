use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::operator::Operator;
use super::space::CompositeSpace;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Deterministic generator used for every seeded sampler in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal sample (unit variance, split evenly).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * s, im * s)
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` pushed back into `Q`.
pub fn haar_unitary_with<R: Rng + ?Sized>(space: CompositeSpace, rng: &mut R) -> Operator {
    let n = space.total();
    let qr = ginibre(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    Operator::new(q, space).expect("square of matching size")
}

pub fn random_unitary(space: CompositeSpace, seed: u64) -> Operator {
    haar_unitary_with(space, &mut rng_from_seed(seed))
}

/// Random density matrix of exact rank `rank`: `G G† / tr(G G†)` with `G` Ginibre `n × rank`.
pub fn random_density_with<R: Rng + ?Sized>(space: CompositeSpace, rank: usize, rng: &mut R) -> Result<Operator> {
    let n = space.total();
    if rank == 0 || rank > n {
        return Err(Error::InvalidRank { rank, dim: n });
    }
    let g = ginibre(n, rank, rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    Operator::new(rho / tr, space)
}

pub fn random_density(space: CompositeSpace, rank: usize, seed: u64) -> Result<Operator> {
    random_density_with(space, rank, &mut rng_from_seed(seed))
}

/// Uniformly (Haar) distributed pure state.
pub fn random_pure_with<R: Rng + ?Sized>(space: CompositeSpace, rng: &mut R) -> StateVector {
    let n = space.total();
    let amps: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
    StateVector::new(amps, space).expect("gaussian vector is nonzero almost surely")
}

pub fn random_pure(space: CompositeSpace, seed: u64) -> StateVector {
    random_pure_with(space, &mut rng_from_seed(seed))
}

/// Random hermitian matrix with Gaussian entries (GUE, unnormalized).
pub fn random_hermitian_with<R: Rng + ?Sized>(space: CompositeSpace, rng: &mut R) -> Operator {
    let n = space.total();
    let g = ginibre(n, n, rng);
    let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    Operator::new(h, space).expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_by_construction() {
        let u = random_unitary(CompositeSpace::single(4), 7);
        assert!(u.is_unitary(1e-12));
    }

    #[test]
    fn density_has_requested_rank() {
        let rho = random_density(CompositeSpace::single(4), 2, 11).unwrap();
        assert!(rho.is_density(1e-12));
        let count = rho.hermitian_eigenvalues().iter().filter(|&&l| l > 1e-10).count();
        assert_eq!(count, 2);
        assert!(random_density(CompositeSpace::single(4), 5, 1).is_err());
        assert!(random_density(CompositeSpace::single(4), 0, 1).is_err());
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let a = random_unitary(CompositeSpace::qubits(2), 42);
        let b = random_unitary(CompositeSpace::qubits(2), 42);
        assert_eq!(a, b);
        let p = random_pure(CompositeSpace::single(3), 5);
        let q = random_pure(CompositeSpace::single(3), 5);
        assert_eq!(p, q);
        assert_ne!(random_unitary(CompositeSpace::qubits(2), 43), a);
    }
}
