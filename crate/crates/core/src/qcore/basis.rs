use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::operator::Operator;
use super::space::CompositeSpace;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Orthonormal basis of a (possibly composite) space; vectors are the columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    vectors: DMatrix<C64>,
    space: CompositeSpace,
    label: String,
}

/// Orthonormality defect tolerated when constructing a basis.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

impl Basis {
    pub fn new(vectors: DMatrix<C64>, space: CompositeSpace, label: impl Into<String>) -> Result<Self> {
        let n = space.total();
        if vectors.nrows() != n || vectors.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "basis",
                expected: n,
                found: vectors.ncols(),
            });
        }
        let gram = vectors.adjoint() * &vectors;
        let defect = (gram - DMatrix::<C64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(Self {
            vectors,
            space,
            label: label.into(),
        })
    }

    pub fn from_states(states: &[StateVector], label: impl Into<String>) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty basis".into()))?;
        let space = first.space().clone();
        let n = space.total();
        if states.len() != n {
            return Err(Error::DimensionMismatch {
                context: "basis size",
                expected: n,
                found: states.len(),
            });
        }
        let m = DMatrix::from_fn(n, n, |i, j| states[j].amplitudes()[i]);
        Self::new(m, space, label)
    }

    pub fn computational(space: CompositeSpace) -> Self {
        let n = space.total();
        Self {
            vectors: DMatrix::identity(n, n),
            space,
            label: "computational".into(),
        }
    }

    /// Qubit basis `(α|↑⟩ + β|↓⟩, β̄|↑⟩ − ᾱ|↓⟩)`; `(α, β)` is normalized first.
    pub fn qubit(alpha: C64, beta: C64, label: impl Into<String>) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidParameter("basis coefficients vanish".into()));
        }
        let (a, b) = (alpha / norm, beta / norm);
        let m = DMatrix::from_row_slice(2, 2, &[a, b.conj(), b, -a.conj()]);
        Self::new(m, CompositeSpace::single(2), label)
    }

    /// Qubit basis whose first vector is the Bloch direction `(θ, φ)`.
    pub fn qubit_angles(theta: f64, phi: f64) -> Self {
        Self::qubit(
            C64::new((theta / 2.0).cos(), 0.0),
            C64::from_polar((theta / 2.0).sin(), phi),
            format!("bloch({theta},{phi})"),
        )
        .expect("unit vector")
    }

    pub fn z() -> Self {
        Self::computational(CompositeSpace::single(2)).relabel("z")
    }

    pub fn x() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::qubit(C64::new(s, 0.0), C64::new(s, 0.0), "x").expect("unit vector")
    }

    pub fn y() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::qubit(C64::new(s, 0.0), C64::new(0.0, s), "y").expect("unit vector")
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> StateVector {
        StateVector::from_vector(self.vectors.column(i).into_owned(), self.space.clone())
            .expect("basis vectors are normalized")
    }

    /// Change-of-basis unitary whose columns are the basis vectors.
    pub fn unitary(&self) -> Operator {
        Operator::new(self.vectors.clone(), self.space.clone()).expect("square")
    }

    /// `ρ` expressed in this basis: `B† ρ B`.
    pub fn represent(&self, rho: &Operator) -> DMatrix<C64> {
        self.vectors.adjoint() * rho.matrix() * &self.vectors
    }

    /// Tensor product basis, vectors ordered lexicographically.
    pub fn tensor(&self, other: &Basis) -> Basis {
        Basis {
            vectors: self.vectors.kronecker(&other.vectors),
            space: self.space.concat(&other.space),
            label: format!("{}⊗{}", self.label, other.label),
        }
    }
}

impl Serialize for Basis {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_basis_matches_convention() {
        let b = Basis::qubit(C64::new(0.6, 0.0), C64::new(0.0, 0.8), "u").unwrap();
        let up = b.vector(0);
        let down = b.vector(1);
        assert!(up.inner(&down).norm() < 1e-15);
        assert!((down.amplitudes()[0] - C64::new(0.0, -0.8)).norm() < 1e-15);
        assert!((down.amplitudes()[1] - C64::new(-0.6, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_orthonormal() {
        let m = DMatrix::from_row_slice(2, 2, &[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(
            Basis::new(m, CompositeSpace::single(2), "bad"),
            Err(Error::NotOrthonormal { .. })
        ));
    }
}
