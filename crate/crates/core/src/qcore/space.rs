use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered tensor factorization `H_1 ⊗ … ⊗ H_k` of a finite Hilbert space.
///
/// All index arithmetic for tensor products, partial traces and local
/// operator application goes through this type. Factor 0 is the most
/// significant digit of a flat basis index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CompositeSpace {
    dims: Vec<usize>,
}

impl CompositeSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidFactors("a space needs at least one factor".into()));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidFactors(format!("factor {pos} has dimension 0")));
        }
        Ok(Self { dims })
    }

    /// Single-factor space of dimension `d`.
    pub fn single(d: usize) -> Self {
        Self::new(vec![d]).expect("dimension must be positive")
    }

    /// `n` qubit factors.
    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n]).expect("at least one qubit")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Factor list of `self ⊗ other`.
    pub fn concat(&self, other: &CompositeSpace) -> CompositeSpace {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        CompositeSpace { dims }
    }

    /// Subspace made of the given factors, in the order given.
    pub fn select(&self, factors: &[usize]) -> Result<CompositeSpace> {
        self.check_factors(factors)?;
        CompositeSpace::new(factors.iter().map(|&f| self.dims[f]).collect())
    }

    /// Strides of every factor in a flat row-major index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Factors not listed in `factors`, ascending.
    pub fn complement(&self, factors: &[usize]) -> Vec<usize> {
        (0..self.dims.len()).filter(|f| !factors.contains(f)).collect()
    }

    /// Validate a set of distinct, in-range factor indices.
    pub fn check_factors(&self, factors: &[usize]) -> Result<()> {
        for (i, &f) in factors.iter().enumerate() {
            if f >= self.dims.len() {
                return Err(Error::InvalidFactors(format!(
                    "factor index {f} out of range for {} factors",
                    self.dims.len()
                )));
            }
            if factors[..i].contains(&f) {
                return Err(Error::InvalidFactors(format!("factor index {f} repeated")));
            }
        }
        Ok(())
    }

    /// Flat offsets contributed by every joint configuration of `factors`,
    /// enumerated in row-major order of those factors.
    pub(crate) fn offsets(&self, factors: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offsets = vec![0usize];
        for &f in factors {
            let mut next = Vec::with_capacity(offsets.len() * self.dims[f]);
            for &o in &offsets {
                for digit in 0..self.dims[f] {
                    next.push(o + digit * strides[f]);
                }
            }
            offsets = next;
        }
        offsets
    }

    /// Split a flat index into per-factor digits.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            digits[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        digits
    }
}

impl TryFrom<Vec<usize>> for CompositeSpace {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        CompositeSpace::new(dims)
    }
}

impl From<CompositeSpace> for Vec<usize> {
    fn from(space: CompositeSpace) -> Self {
        space.dims
    }
}

impl std::fmt::Display for CompositeSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join("x"))
    }
}
