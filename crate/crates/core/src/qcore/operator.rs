use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::space::CompositeSpace;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Dense square operator on a [`CompositeSpace`].
///
/// Used uniformly for density matrices, unitaries, observables and
/// projectors; the classification predicates below take explicit tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
    space: CompositeSpace,
}

impl Operator {
    pub fn new(mat: DMatrix<C64>, space: CompositeSpace) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                context: "operator (not square)",
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        if mat.nrows() != space.total() {
            return Err(Error::DimensionMismatch {
                context: "operator vs space",
                expected: space.total(),
                found: mat.nrows(),
            });
        }
        Ok(Self { mat, space })
    }

    /// Operator on a single factor of dimension `mat.nrows()`.
    pub fn single(mat: DMatrix<C64>) -> Result<Self> {
        let space = CompositeSpace::new(vec![mat.nrows().max(1)])?;
        Self::new(mat, space)
    }

    pub fn from_fn(space: CompositeSpace, f: impl FnMut(usize, usize) -> C64) -> Self {
        let n = space.total();
        Self {
            mat: DMatrix::from_fn(n, n, f),
            space,
        }
    }

    /// Row-major construction from real-valued entries.
    pub fn from_real_rows(space: CompositeSpace, rows: &[&[f64]]) -> Result<Self> {
        let n = space.total();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                context: "real rows",
                expected: n,
                found: rows.len(),
            });
        }
        Ok(Self::from_fn(space, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn identity(space: CompositeSpace) -> Self {
        let n = space.total();
        Self {
            mat: DMatrix::identity(n, n),
            space,
        }
    }

    pub fn zeros(space: CompositeSpace) -> Self {
        let n = space.total();
        Self {
            mat: DMatrix::zeros(n, n),
            space,
        }
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &StateVector) -> Self {
        let v = psi.amplitudes();
        Self {
            mat: v * v.adjoint(),
            space: psi.space().clone(),
        }
    }

    /// Diagonal operator with real entries.
    pub fn diagonal(space: CompositeSpace, diag: &[f64]) -> Result<Self> {
        if diag.len() != space.total() {
            return Err(Error::DimensionMismatch {
                context: "diagonal",
                expected: space.total(),
                found: diag.len(),
            });
        }
        Ok(Self::from_fn(space, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Same entries, relabelled onto another factorization of equal total dimension.
    pub fn with_space(self, space: CompositeSpace) -> Result<Self> {
        Self::new(self.mat, space)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
            space: self.space.clone(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            mat: &self.mat * z,
            space: self.space.clone(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self · other`, checking that both live on the same space.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.check_same_space(other, "compose")?;
        Ok(Self {
            mat: &self.mat * &other.mat,
            space: self.space.clone(),
        })
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Operator> {
        self.check_same_space(u, "conjugate_by")?;
        Ok(Self {
            mat: &u.mat * &self.mat * u.mat.adjoint(),
            space: self.space.clone(),
        })
    }

    pub fn check_same_space(&self, other: &Operator, context: &'static str) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.space.total(),
                found: other.space.total(),
            });
        }
        Ok(())
    }

    /// Maximum entry of `|A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.mat - self.mat.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Maximum entry of `|U U† − 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        (&self.mat * self.mat.adjoint() - DMatrix::<C64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.is_hermitian(tol)
            && self
                .hermitian_eigenvalues()
                .iter()
                .all(|&lambda| lambda >= -tol)
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol)
            && (&self.mat * &self.mat - &self.mat)
                .iter()
                .all(|z| z.norm() <= tol)
    }

    pub fn is_density(&self, tol: f64) -> bool {
        let tr = self.trace();
        self.is_psd(tol) && (tr.re - 1.0).abs() <= tol && tr.im.abs() <= tol
    }

    /// Eigenvalues of the hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        super::linalg::singular_values(&self.mat)
    }

    /// Schatten-1 norm `‖A‖₁`.
    pub fn trace_norm(&self) -> f64 {
        self.singular_values().iter().sum()
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> C64 {
        let v = psi.amplitudes();
        (v.adjoint() * &self.mat * v)[(0, 0)]
    }

    /// Frobenius distance after removing the optimal global phase, and that phase.
    ///
    /// Minimizes `‖self − e^{iφ} other‖_F` over `φ`; the minimizer is
    /// `φ = arg tr(other† self)`.
    pub fn phase_aligned_distance(&self, other: &Operator) -> (f64, f64) {
        let overlap = (other.mat.adjoint() * &self.mat).trace();
        let phi = if overlap.norm() > 0.0 { overlap.arg() } else { 0.0 };
        let aligned = &other.mat * C64::from_polar(1.0, phi);
        let dist = (&self.mat - aligned).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        (dist, phi)
    }

    /// Kronecker product; the result's factor list is the concatenation.
    pub fn tensor(&self, other: &Operator) -> Operator {
        Operator {
            mat: self.mat.kronecker(&other.mat),
            space: self.space.concat(&other.space),
        }
    }

    /// Partial trace keeping `keep` (in their original order).
    ///
    /// `keep` must be a nonempty proper subset of the factors.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Operator> {
        let n = self.space.num_factors();
        if n < 2 {
            return Err(Error::InvalidFactors(
                "partial trace needs at least two factors".into(),
            ));
        }
        self.space.check_factors(keep)?;
        if keep.is_empty() || keep.len() == n {
            return Err(Error::InvalidFactors(
                "kept factors must be a nonempty proper subset".into(),
            ));
        }
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        let traced = self.space.complement(&keep_sorted);
        let keep_off = self.space.offsets(&keep_sorted);
        let traced_off = self.space.offsets(&traced);
        let m = keep_off.len();
        let mut out = DMatrix::<C64>::zeros(m, m);
        for (a, &ra) in keep_off.iter().enumerate() {
            for (b, &rb) in keep_off.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &t in &traced_off {
                    acc += self.mat[(ra + t, rb + t)];
                }
                out[(a, b)] = acc;
            }
        }
        let reduced = Operator {
            mat: out,
            space: self.space.select(&keep_sorted)?,
        };
        if keep_sorted.as_slice() == keep {
            Ok(reduced)
        } else {
            // caller asked for a different factor order
            let order: Vec<usize> = keep
                .iter()
                .map(|f| keep_sorted.iter().position(|g| g == f).unwrap())
                .collect();
            reduced.permute(&order)
        }
    }

    /// Reorder tensor factors: factor `k` of the result is factor `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<Operator> {
        let perm = super::state::permutation_map(&self.space, order)?;
        let space = self.space.select(order)?;
        let n = self.dim();
        let mut out = DMatrix::<C64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.mat[(perm[i], perm[j])];
            }
        }
        Operator::new(out, space)
    }

    /// Lift `self` onto `full`, acting on `factors` (in that order) and as the
    /// identity elsewhere.
    pub fn embed(&self, full: &CompositeSpace, factors: &[usize]) -> Result<Operator> {
        full.check_factors(factors)?;
        let local = full.select(factors)?;
        if local.total() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "embed",
                expected: local.total(),
                found: self.dim(),
            });
        }
        let rest = full.complement(factors);
        let local_off = full.offsets(factors);
        let rest_off = full.offsets(&rest);
        let n = full.total();
        let mut out = DMatrix::<C64>::zeros(n, n);
        for &r in &rest_off {
            for (a, &oa) in local_off.iter().enumerate() {
                for (b, &ob) in local_off.iter().enumerate() {
                    out[(r + oa, r + ob)] = self.mat[(a, b)];
                }
            }
        }
        Operator::new(out, full.clone())
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator {
            mat: &self.mat + &rhs.mat,
            space: self.space.clone(),
        }
    }
}

impl std::ops::Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator {
            mat: &self.mat - &rhs.mat,
            space: self.space.clone(),
        }
    }
}

impl std::ops::Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator {
            mat: &self.mat * &rhs.mat,
            space: self.space.clone(),
        }
    }
}

impl Serialize for Operator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.mat[(i, j)].re, self.mat[(i, j)].im]).collect())
            .collect();
        let mut st = serializer.serialize_struct("Operator", 2)?;
        st.serialize_field("dims", self.space.dims())?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

/// `a ⊗ b`.
pub fn tensor_product(a: &Operator, b: &Operator) -> Operator {
    a.tensor(b)
}

/// Partial trace of `m` keeping the factors in `keep`.
pub fn partial_trace(m: &Operator, keep: &[usize]) -> Result<Operator> {
    m.partial_trace(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates;

    fn close(a: &Operator, b: &Operator, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = Operator::identity(CompositeSpace::single(2));
        let i4 = tensor_product(&i2, &i2);
        assert_eq!(i4.space().dims(), &[2, 2]);
        assert!(close(&i4, &Operator::identity(CompositeSpace::qubits(2)), 0.0));
    }

    #[test]
    fn product_projector_is_rank_one() {
        let up = StateVector::basis(CompositeSpace::single(2), 0);
        let down = StateVector::basis(CompositeSpace::single(2), 1);
        let p = tensor_product(&Operator::projector(&up), &Operator::projector(&down));
        let updown = StateVector::basis(CompositeSpace::qubits(2), 1);
        assert!(close(&p, &Operator::projector(&updown), 0.0));
        assert!(p.is_projector(1e-14));
        assert_eq!(p.singular_values().iter().filter(|&&s| s > 1e-12).count(), 1);
    }

    #[test]
    fn sigma_x_tensor_sigma_z_squares_to_identity() {
        let xz = tensor_product(&gates::sigma_x(), &gates::sigma_z());
        // explicit 4x4: X⊗Z = [[0,Z],[Z,0]]
        let explicit = Operator::from_real_rows(
            CompositeSpace::qubits(2),
            &[
                &[0.0, 0.0, 1.0, 0.0],
                &[0.0, 0.0, 0.0, -1.0],
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, -1.0, 0.0, 0.0],
            ],
        )
        .unwrap();
        assert!(close(&xz, &explicit, 0.0));
        let sq = &explicit * &explicit;
        assert!(close(&sq, &Operator::identity(CompositeSpace::qubits(2)), 0.0));
    }

    #[test]
    fn partial_trace_of_product() {
        let a = gates::sigma_x().scale(C64::new(0.3, 0.0));
        let b = Operator::from_real_rows(CompositeSpace::single(2), &[&[2.0, 1.0], &[1.0, 5.0]]).unwrap();
        let ab = tensor_product(&a, &b);
        let tr2 = ab.partial_trace(&[0]).unwrap();
        assert!(close(&tr2, &a.scale(b.trace()), 1e-15));
        let tr1 = ab.partial_trace(&[1]).unwrap();
        assert!(close(&tr1, &b.scale(a.trace()), 1e-15));
    }

    #[test]
    fn partial_trace_of_bell_pair_by_index_sum() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = StateVector::new(
            vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)],
            CompositeSpace::qubits(2),
        )
        .unwrap();
        let rho = Operator::projector(&phi);
        // oracle: (tr_1 ρ)[b,b'] = Σ_a ρ[(a,b),(a,b')]
        let mut oracle = DMatrix::<C64>::zeros(2, 2);
        for b in 0..2 {
            for bp in 0..2 {
                for a in 0..2 {
                    oracle[(b, bp)] += rho.matrix()[(2 * a + b, 2 * a + bp)];
                }
            }
        }
        let reduced = rho.partial_trace(&[1]).unwrap();
        assert!((reduced.matrix() - &oracle).iter().all(|z| z.norm() < 1e-15));
        let half_id = Operator::identity(CompositeSpace::single(2)).scale(C64::new(0.5, 0.0));
        assert!(close(&reduced, &half_id, 1e-15));
    }

    #[test]
    fn partial_trace_contract_violations() {
        let rho = Operator::identity(CompositeSpace::qubits(2));
        assert!(rho.partial_trace(&[]).is_err());
        assert!(rho.partial_trace(&[0, 1]).is_err());
        assert!(rho.partial_trace(&[2]).is_err());
        assert!(Operator::identity(CompositeSpace::single(4)).partial_trace(&[0]).is_err());
    }

    #[test]
    fn partial_trace_respects_requested_order() {
        let a = gates::sigma_x();
        let b = gates::sigma_z();
        let c = gates::hadamard();
        let abc = a.tensor(&b).tensor(&c);
        let ca = abc.partial_trace(&[2, 0]).unwrap();
        let expected = c.tensor(&a).scale(b.trace());
        assert!(close(&ca, &expected, 1e-14));
    }

    #[test]
    fn embed_matches_kronecker() {
        let x = gates::sigma_x();
        let full = CompositeSpace::new(vec![2, 3, 2]).unwrap();
        let lifted = x.embed(&full, &[2]).unwrap();
        let explicit = Operator::identity(CompositeSpace::single(2))
            .tensor(&Operator::identity(CompositeSpace::single(3)))
            .tensor(&x);
        assert!(close(&lifted, &explicit, 0.0));
    }

    #[test]
    fn phase_alignment_recovers_global_phase() {
        let h = gates::hadamard();
        let rotated = h.scale(C64::from_polar(1.0, 0.7));
        let (d, phi) = rotated.phase_aligned_distance(&h);
        assert!(d < 1e-14);
        assert!((phi - 0.7).abs() < 1e-14);
    }

    #[test]
    fn classification_predicates() {
        let rho = Operator::from_real_rows(CompositeSpace::single(2), &[&[0.75, 0.0], &[0.0, 0.25]]).unwrap();
        assert!(rho.is_density(1e-12));
        assert!(!rho.is_projector(1e-12));
        assert!(gates::hadamard().is_unitary(1e-14));
        let not_herm = Operator::from_real_rows(CompositeSpace::single(2), &[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(!not_herm.is_hermitian(1e-12));
        assert!((not_herm.trace_norm() - 1.0).abs() < 1e-14);
    }
}
