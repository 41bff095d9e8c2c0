//! Singular value decomposition with a recomposition check.
//!
//! nalgebra's complex SVD occasionally returns a wrong factorization (seen on
//! rank-one 9×9 inputs: the leading singular value off by 10% and `U Σ V†`
//! far from the input). The decomposition is therefore verified, and on
//! failure recomputed for `W M` with a random unitary `W`, which has the same
//! singular values and right vectors; the left vectors are rotated back.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::random::{haar_unitary_with, rng_from_seed};
use super::space::CompositeSpace;

const MAX_RETRIES: u64 = 16;

#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<C64>,
    pub singular_values: DVector<f64>,
    pub v_t: DMatrix<C64>,
}

impl Svd {
    pub fn recompose(&self) -> DMatrix<C64> {
        let sigma = DMatrix::from_diagonal(&self.singular_values.map(|s| C64::new(s, 0.0)));
        &self.u * sigma * &self.v_t
    }
}

fn attempt(m: &DMatrix<C64>) -> (Svd, f64) {
    let raw = m.clone().svd(true, true);
    let svd = Svd {
        u: raw.u.expect("requested"),
        singular_values: raw.singular_values,
        v_t: raw.v_t.expect("requested"),
    };
    let k = svd.singular_values.len();
    let orth_u = (svd.u.adjoint() * &svd.u - DMatrix::identity(k, k)).norm();
    let orth_v = (&svd.v_t * svd.v_t.adjoint() - DMatrix::identity(k, k)).norm();
    let err = (svd.recompose() - m).norm() / m.norm().max(f64::MIN_POSITIVE) + orth_u + orth_v;
    (svd, err)
}

/// Thin SVD `M = U Σ V†`, verified to `1e-12` relative.
pub fn svd(m: &DMatrix<C64>) -> Svd {
    let (first, err) = attempt(m);
    if err <= 1e-12 * (m.nrows().max(m.ncols()) as f64) || m.is_empty() {
        return first;
    }
    let mut best = (first, err);
    for retry in 0..MAX_RETRIES {
        let mut rng = rng_from_seed(0x5eed_0000 + retry);
        let w = haar_unitary_with(CompositeSpace::single(m.nrows()), &mut rng).into_matrix();
        let (rotated, err) = attempt(&(&w * m));
        let svd = Svd { u: w.adjoint() * rotated.u, ..rotated };
        if err <= 1e-12 * (m.nrows().max(m.ncols()) as f64) {
            return svd;
        }
        if err < best.1 {
            best = (svd, err);
        }
    }
    best.0
}

pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let mut s: Vec<f64> = svd(m).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::random::ginibre;

    #[test]
    fn recomposes_rank_one_products() {
        // Rearranged Kronecker products of Haar unitaries are exactly the
        // inputs that tripped the unchecked decomposition.
        let mut rng = rng_from_seed(1);
        for _ in 0..60 {
            let a = haar_unitary_with(CompositeSpace::single(3), &mut rng).into_matrix();
            let b = haar_unitary_with(CompositeSpace::single(3), &mut rng).into_matrix();
            let va = DMatrix::from_fn(9, 1, |i, _| a[(i / 3, i % 3)]);
            let vb = DMatrix::from_fn(1, 9, |_, j| b[(j / 3, j % 3)]);
            let r = va * vb;
            let s = svd(&r);
            assert!((s.recompose() - &r).norm() < 1e-12);
            let top = s.singular_values.iter().cloned().fold(0.0, f64::max);
            assert!((top - 3.0).abs() < 1e-12, "{top}");
        }
    }

    #[test]
    fn rectangular() {
        let mut rng = rng_from_seed(2);
        let m = ginibre(4, 9, &mut rng);
        let s = svd(&m);
        assert!((s.recompose() - &m).norm() < 1e-12);
        assert_eq!(singular_values(&m).len(), 4);
    }
}
