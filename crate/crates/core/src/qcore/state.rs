use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::operator::Operator;
use super::space::CompositeSpace;
use crate::error::{Error, Result};

/// Normalized pure state on a [`CompositeSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
    space: CompositeSpace,
}

/// Largest joint dimension for which state vectors are simulated.
pub const MAX_STATE_DIM: usize = 1 << 13;

impl StateVector {
    /// Normalizes `amps`; rejects zero vectors and length mismatches.
    pub fn new(amps: Vec<C64>, space: CompositeSpace) -> Result<Self> {
        Self::from_vector(DVector::from_vec(amps), space)
    }

    pub fn from_vector(amps: DVector<C64>, space: CompositeSpace) -> Result<Self> {
        if amps.len() != space.total() {
            return Err(Error::DimensionMismatch {
                context: "state vector",
                expected: space.total(),
                found: amps.len(),
            });
        }
        if space.total() > MAX_STATE_DIM {
            return Err(Error::ResourceLimit(format!(
                "state dimension {} exceeds {MAX_STATE_DIM}",
                space.total()
            )));
        }
        let norm = amps.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidParameter("state vector has zero norm".into()));
        }
        // Leave already-normalized input untouched so serialized states round-trip exactly.
        let amps = if (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
            amps
        } else {
            amps / C64::new(norm, 0.0)
        };
        Ok(Self { amps, space })
    }

    pub fn from_real(amps: &[f64], space: CompositeSpace) -> Result<Self> {
        Self::new(amps.iter().map(|&a| C64::new(a, 0.0)).collect(), space)
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(space: CompositeSpace, index: usize) -> Self {
        let mut amps = DVector::zeros(space.total());
        amps[index] = C64::new(1.0, 0.0);
        Self { amps, space }
    }

    /// `|ψ₁⟩ ⊗ |ψ₂⟩ ⊗ …`.
    pub fn product(parts: &[&StateVector]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("empty product".into()))?;
        let mut acc = (*first).clone();
        for p in rest {
            acc = acc.tensor(p)?;
        }
        Ok(acc)
    }

    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let space = self.space.concat(&other.space);
        if space.total() > MAX_STATE_DIM {
            return Err(Error::ResourceLimit(format!(
                "state dimension {} exceeds {MAX_STATE_DIM}",
                space.total()
            )));
        }
        Ok(Self {
            amps: self.amps.kronecker(&other.amps),
            space,
        })
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn density(&self) -> Operator {
        Operator::projector(self)
    }

    /// Full-space operator application (the result is renormalized).
    pub fn apply(&self, op: &Operator) -> Result<StateVector> {
        if op.space() != &self.space {
            return Err(Error::DimensionMismatch {
                context: "apply",
                expected: self.dim(),
                found: op.dim(),
            });
        }
        Self::from_vector(op.matrix() * &self.amps, self.space.clone())
    }

    /// Apply `op` to the listed factors (in that order) without renormalizing.
    pub fn apply_local_raw(&self, op: &Operator, factors: &[usize]) -> Result<DVector<C64>> {
        self.space.check_factors(factors)?;
        let local_dim: usize = factors.iter().map(|&f| self.space.dims()[f]).product();
        if local_dim != op.dim() {
            return Err(Error::DimensionMismatch {
                context: "local operator",
                expected: local_dim,
                found: op.dim(),
            });
        }
        let rest = self.space.complement(factors);
        let local_off = self.space.offsets(factors);
        let rest_off = self.space.offsets(&rest);
        let m = op.matrix();
        let mut out = DVector::<C64>::zeros(self.dim());
        let mut buf = vec![C64::new(0.0, 0.0); local_dim];
        for &r in &rest_off {
            for (a, &oa) in local_off.iter().enumerate() {
                buf[a] = self.amps[r + oa];
            }
            for (a, &oa) in local_off.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (b, x) in buf.iter().enumerate() {
                    acc += m[(a, b)] * x;
                }
                out[r + oa] = acc;
            }
        }
        Ok(out)
    }

    /// Apply a local unitary to the listed factors.
    pub fn apply_local(&self, op: &Operator, factors: &[usize]) -> Result<StateVector> {
        let out = self.apply_local_raw(op, factors)?;
        Self::from_vector(out, self.space.clone())
    }

    /// Project the listed factors with `projector`; returns the normalized
    /// branch and its Born weight, or `None` if the branch vanishes.
    pub fn project_local(
        &self,
        projector: &Operator,
        factors: &[usize],
    ) -> Result<Option<(StateVector, f64)>> {
        let out = self.apply_local_raw(projector, factors)?;
        let weight = out.norm_squared();
        if weight <= f64::EPSILON * f64::EPSILON {
            return Ok(None);
        }
        Ok(Some((Self::from_vector(out, self.space.clone())?, weight)))
    }

    /// Reduced density matrix on `keep` (any nonempty subset, in the order given).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<Operator> {
        self.space.check_factors(keep)?;
        if keep.is_empty() {
            return Err(Error::InvalidFactors("nothing to keep".into()));
        }
        let traced = self.space.complement(keep);
        let keep_off = self.space.offsets(keep);
        let traced_off = self.space.offsets(&traced);
        let m = keep_off.len();
        // rows: kept configuration, columns: traced configuration
        let block = DMatrix::<C64>::from_fn(m, traced_off.len(), |a, t| self.amps[keep_off[a] + traced_off[t]]);
        let rho = &block * block.adjoint();
        Operator::new(rho, self.space.select(keep)?)
    }

    /// Amplitudes arranged as a `dim(first) × dim(rest)` matrix, rows indexed
    /// by the configuration of `first`.
    pub fn bipartite_matrix(&self, first: &[usize]) -> Result<DMatrix<C64>> {
        self.space.check_factors(first)?;
        let rest = self.space.complement(first);
        let a_off = self.space.offsets(first);
        let b_off = self.space.offsets(&rest);
        Ok(DMatrix::from_fn(a_off.len(), b_off.len(), |a, b| self.amps[a_off[a] + b_off[b]]))
    }

    /// Schmidt coefficients across the cut `first | rest`, descending.
    pub fn schmidt_coefficients(&self, first: &[usize]) -> Result<Vec<f64>> {
        let m = self.bipartite_matrix(first)?;
        Ok(super::linalg::singular_values(&m))
    }

    /// Number of Schmidt coefficients above `tol` across `first | rest`.
    pub fn schmidt_rank(&self, first: &[usize], tol: f64) -> Result<usize> {
        Ok(self.schmidt_coefficients(first)?.iter().filter(|&&s| s > tol).count())
    }

    /// Same amplitudes viewed in another factorization of equal total dimension.
    pub fn reshape(&self, space: CompositeSpace) -> Result<StateVector> {
        if space.total() != self.dim() {
            return Err(Error::DimensionMismatch { context: "reshape", expected: self.dim(), found: space.total() });
        }
        Ok(Self { amps: self.amps.clone(), space })
    }

    /// Reorder tensor factors: factor `k` of the result is factor `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<StateVector> {
        let perm = permutation_map(&self.space, order)?;
        let amps = DVector::from_fn(self.dim(), |i, _| self.amps[perm[i]]);
        Ok(Self {
            amps,
            space: self.space.select(order)?,
        })
    }
}

/// For a reordering of factors, maps each flat index of the permuted space to
/// the flat index of the original space.
pub(crate) fn permutation_map(space: &CompositeSpace, order: &[usize]) -> Result<Vec<usize>> {
    if order.len() != space.num_factors() {
        return Err(Error::InvalidFactors("permutation must list every factor".into()));
    }
    space.check_factors(order)?;
    let permuted = space.select(order)?;
    let strides = space.strides();
    Ok((0..space.total())
        .map(|i| {
            permuted
                .digits(i)
                .iter()
                .zip(order)
                .map(|(d, &f)| d * strides[f])
                .sum()
        })
        .collect())
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let amps: Vec<[f64; 2]> = self.amps.iter().map(|z| [z.re, z.im]).collect();
        let mut st = serializer.serialize_struct("StateVector", 2)?;
        st.serialize_field("dims", self.space.dims())?;
        st.serialize_field("amplitudes", &amps)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates;

    #[test]
    fn construction_normalizes() {
        let psi = StateVector::from_real(&[3.0, 4.0], CompositeSpace::single(2)).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-15);
        assert!(StateVector::from_real(&[0.0, 0.0], CompositeSpace::single(2)).is_err());
        assert!(StateVector::from_real(&[1.0], CompositeSpace::single(2)).is_err());
    }

    #[test]
    fn local_application_matches_embedded_operator() {
        let space = CompositeSpace::new(vec![2, 3, 2]).unwrap();
        let psi = StateVector::new(
            (0..12).map(|k| C64::new(k as f64 + 1.0, 0.5 * k as f64)).collect(),
            space.clone(),
        )
        .unwrap();
        let cnot = gates::cnot();
        let local = psi.apply_local(&cnot, &[2, 0]).unwrap();
        let full = cnot.embed(&space, &[2, 0]).unwrap();
        let direct = psi.apply(&full).unwrap();
        assert!((local.amplitudes() - direct.amplitudes()).norm() < 1e-14);
    }

    #[test]
    fn reduced_density_matches_operator_partial_trace() {
        let space = CompositeSpace::new(vec![2, 3, 2]).unwrap();
        let psi = StateVector::new(
            (0..12).map(|k| C64::new((k as f64).sin(), (k as f64).cos())).collect(),
            space,
        )
        .unwrap();
        let a = psi.reduced_density(&[2, 0]).unwrap();
        let b = psi.density().partial_trace(&[2, 0]).unwrap();
        assert!((&a - &b).max_abs() < 1e-14);
    }

    #[test]
    fn schmidt_rank_of_product_and_bell() {
        let up = StateVector::basis(CompositeSpace::single(2), 0);
        let plus = StateVector::from_real(&[1.0, 1.0], CompositeSpace::single(2)).unwrap();
        let prod = up.tensor(&plus).unwrap();
        assert_eq!(prod.schmidt_rank(&[0], 1e-10).unwrap(), 1);
        let bell = StateVector::from_real(&[1.0, 0.0, 0.0, 1.0], CompositeSpace::qubits(2)).unwrap();
        assert_eq!(bell.schmidt_rank(&[0], 1e-10).unwrap(), 2);
    }

    #[test]
    fn permute_swaps_factors() {
        let a = StateVector::from_real(&[1.0, 2.0], CompositeSpace::single(2)).unwrap();
        let b = StateVector::from_real(&[1.0, 0.0, 3.0], CompositeSpace::single(3)).unwrap();
        let ab = a.tensor(&b).unwrap();
        let ba = b.tensor(&a).unwrap();
        let swapped = ab.permute(&[1, 0]).unwrap();
        assert_eq!(swapped.space().dims(), &[3, 2]);
        assert!((swapped.amplitudes() - ba.amplitudes()).norm() < 1e-15);
    }
}
