//! Unitary evolutions that act on state vectors, either as one dense matrix or
//! as a sequence of local gates (for spaces too large for dense operators).

use super::operator::Operator;
use super::space::CompositeSpace;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Anything that maps states of a fixed space unitarily.
pub trait Evolution {
    fn space(&self) -> &CompositeSpace;
    fn evolve(&self, psi: &StateVector) -> Result<StateVector>;
}

impl Evolution for Operator {
    fn space(&self) -> &CompositeSpace {
        Operator::space(self)
    }

    fn evolve(&self, psi: &StateVector) -> Result<StateVector> {
        psi.apply(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Gate {
    op: Operator,
    factors: Vec<usize>,
}

/// Ordered product of local gates; the first pushed gate acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    space: CompositeSpace,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(space: CompositeSpace) -> Self {
        Self { space, gates: Vec::new() }
    }

    /// Appends `op` acting on `factors` (in that order).
    pub fn push(&mut self, op: Operator, factors: &[usize]) -> Result<&mut Self> {
        self.space.check_factors(factors)?;
        let local: Vec<usize> = factors.iter().map(|&f| self.space.dims()[f]).collect();
        if local.iter().product::<usize>() != op.dim() {
            return Err(Error::DimensionMismatch {
                context: "circuit gate",
                expected: local.iter().product(),
                found: op.dim(),
            });
        }
        self.gates.push(Gate { op, factors: factors.to_vec() });
        Ok(self)
    }

    pub fn then(mut self, op: Operator, factors: &[usize]) -> Result<Self> {
        self.push(op, factors)?;
        Ok(self)
    }

    /// Appends all gates of `other` (same space).
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.space != self.space {
            return Err(Error::InvalidFactors(format!("cannot append a circuit on {} to one on {}", other.space, self.space)));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            space: self.space.clone(),
            gates: self
                .gates
                .iter()
                .rev()
                .map(|g| Gate { op: g.op.adjoint(), factors: g.factors.clone() })
                .collect(),
        }
    }

    /// Dense matrix of the whole circuit, built gate by gate.
    pub fn to_operator(&self) -> Result<Operator> {
        let mut acc = Operator::identity(self.space.clone());
        for g in &self.gates {
            acc = &g.op.embed(&self.space, &g.factors)? * &acc;
        }
        Ok(acc)
    }
}

impl Evolution for Circuit {
    fn space(&self) -> &CompositeSpace {
        &self.space
    }

    fn evolve(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.space() != &self.space {
            return Err(Error::DimensionMismatch { context: "circuit input", expected: self.space.total(), found: psi.dim() });
        }
        let mut cur = psi.clone();
        for g in &self.gates {
            cur = cur.apply_local(&g.op, &g.factors)?;
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{cnot, hadamard};
    use crate::qcore::random::random_pure;

    #[test]
    fn circuit_matches_dense_product() {
        let space = CompositeSpace::qubits(3);
        let c = Circuit::new(space.clone())
            .then(hadamard(), &[0])
            .unwrap()
            .then(cnot(), &[0, 2])
            .unwrap()
            .then(cnot(), &[2, 1])
            .unwrap();
        let dense = c.to_operator().unwrap();
        let psi = random_pure(space, 4);
        let a = c.evolve(&psi).unwrap();
        let b = dense.evolve(&psi).unwrap();
        assert!((a.fidelity(&b) - 1.0).abs() < 1e-13);
        let back = c.inverse().evolve(&a).unwrap();
        assert!((back.fidelity(&psi) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn wrong_gate_size_rejected() {
        let mut c = Circuit::new(CompositeSpace::qubits(2));
        assert!(c.push(cnot(), &[0]).is_err());
    }
}
