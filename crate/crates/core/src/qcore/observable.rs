use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::basis::Basis;
use super::operator::Operator;
use super::space::CompositeSpace;
use crate::error::{Error, Result};

/// Default merge tolerance for numerically degenerate eigenvalues.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Hermiticity defect above which a matrix is refused as an observable.
pub const HERMITICITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralComponent {
    pub eigenvalue: f64,
    pub projector: Operator,
}

/// Hermitian operator together with its spectral projectors `Â = Σ x Π_x`.
///
/// Eigenvalues are distinct and ascending; degenerate eigenspaces are kept
/// as single projectors of rank > 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observable {
    operator: Operator,
    spectrum: Vec<SpectralComponent>,
}

impl Observable {
    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn spectrum(&self) -> &[SpectralComponent] {
        &self.spectrum
    }

    pub fn space(&self) -> &CompositeSpace {
        self.operator.space()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum.iter().map(|c| c.eigenvalue).collect()
    }

    /// Projector of the eigenvalue closest to `outcome`, if within `tol`.
    pub fn projector_for(&self, outcome: f64, tol: f64) -> Option<&Operator> {
        self.spectrum
            .iter()
            .filter(|c| (c.eigenvalue - outcome).abs() <= tol)
            .min_by(|a, b| (a.eigenvalue - outcome).abs().total_cmp(&(b.eigenvalue - outcome).abs()))
            .map(|c| &c.projector)
    }

    /// `Σ x Π_x`.
    pub fn reconstruct(&self) -> Operator {
        let mut acc = Operator::zeros(self.space().clone());
        for c in &self.spectrum {
            acc = &acc + &c.projector.scale(C64::new(c.eigenvalue, 0.0));
        }
        acc
    }

    /// Observable with the given eigenvalues on the given basis vectors.
    /// Equal eigenvalues (within `DEFAULT_CLUSTER_TOL`) share one projector.
    pub fn from_basis(basis: &Basis, eigenvalues: &[f64]) -> Result<Observable> {
        if eigenvalues.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                context: "observable eigenvalues",
                expected: basis.len(),
                found: eigenvalues.len(),
            });
        }
        let space = basis.space().clone();
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
        let groups = cluster(&order, eigenvalues, DEFAULT_CLUSTER_TOL);
        let spectrum = groups
            .into_iter()
            .map(|(value, members)| {
                let mut p = Operator::zeros(space.clone());
                for i in members {
                    p = &p + &Operator::projector(&basis.vector(i));
                }
                SpectralComponent {
                    eigenvalue: value,
                    projector: p,
                }
            })
            .collect();
        let obs = Observable {
            operator: Operator::zeros(space),
            spectrum,
        };
        let operator = obs.reconstruct();
        Ok(Observable { operator, ..obs })
    }

    /// Non-degenerate observable measuring in `basis` with outcomes `0, 1, …`.
    pub fn basis_measurement(basis: &Basis) -> Observable {
        let values: Vec<f64> = (0..basis.len()).map(|i| i as f64).collect();
        Self::from_basis(basis, &values).expect("eigenvalue count matches basis size")
    }

    /// Two-outcome observable `1·Π + 0·(1 − Π)` for a projector `Π`.
    pub fn from_projector(projector: &Operator) -> Result<Observable> {
        if !projector.is_projector(HERMITICITY_TOL) {
            return Err(Error::InvalidParameter("operator is not a projector".into()));
        }
        let complement = &Operator::identity(projector.space().clone()) - projector;
        let mut spectrum = Vec::new();
        if complement.trace().re > 0.5 {
            spectrum.push(SpectralComponent {
                eigenvalue: 0.0,
                projector: complement,
            });
        }
        if projector.trace().re > 0.5 {
            spectrum.push(SpectralComponent {
                eigenvalue: 1.0,
                projector: projector.clone(),
            });
        }
        Ok(Observable {
            operator: projector.clone(),
            spectrum,
        })
    }

    /// Lift onto `full`, acting on `factors`; projectors become `Π_x ⊗ 1`.
    pub fn embed(&self, full: &CompositeSpace, factors: &[usize]) -> Result<Observable> {
        let spectrum = self
            .spectrum
            .iter()
            .map(|c| {
                Ok(SpectralComponent {
                    eigenvalue: c.eigenvalue,
                    projector: c.projector.embed(full, factors)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Observable {
            operator: self.operator.embed(full, factors)?,
            spectrum,
        })
    }
}

fn cluster(order: &[usize], values: &[f64], tol: f64) -> Vec<(f64, Vec<usize>)> {
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &i in order {
        let v = values[i];
        match groups.last_mut() {
            Some((_, members)) if v - last <= tol => members.push(i),
            _ => groups.push((0.0, vec![i])),
        }
        last = v;
    }
    for (mean, members) in &mut groups {
        *mean = members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64;
    }
    groups
}

/// Spectral decomposition of a hermitian operator with eigenvalue clustering.
///
/// Fails with [`Error::NotHermitian`] (reporting the defect) when `h` is not
/// hermitian within `1e-10`.
pub fn spectral_decomposition(h: &Operator, cluster_tol: f64) -> Result<Observable> {
    let defect = h.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let sym = (h.matrix() + h.matrix().adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let n = h.dim();
    let spectrum = cluster(&order, &values, cluster_tol)
        .into_iter()
        .map(|(value, members)| {
            let mut p = DMatrix::<C64>::zeros(n, n);
            for i in members {
                let v = eig.eigenvectors.column(i);
                p += v * v.adjoint();
            }
            SpectralComponent {
                eigenvalue: value,
                projector: Operator::new(p, h.space().clone()).expect("same dimension"),
            }
        })
        .collect();
    Ok(Observable {
        operator: h.clone(),
        spectrum,
    })
}
