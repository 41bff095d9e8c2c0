//! CHSH value of a two-qubit state, maximized over measurement directions.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::optimize::nelder_mead;
use crate::qcore::gates::{sigma_x, sigma_y, sigma_z};
use crate::qcore::Operator;

/// `T_ij = tr(ρ σ_i ⊗ σ_j)`.
pub fn correlation_matrix(rho: &Operator) -> Result<Matrix3<f64>> {
    if rho.space().dims() != [2, 2] {
        return Err(Error::InvalidFactors(format!("CHSH needs a two-qubit state, found {}", rho.space())));
    }
    let paulis = [sigma_x(), sigma_y(), sigma_z()];
    Ok(Matrix3::from_fn(|i, j| {
        let obs = paulis[i].tensor(&paulis[j]);
        (rho.matrix().component_mul(&obs.matrix().transpose())).sum().re
    }))
}

/// `E(a,b) + E(a,b') + E(a',b) − E(a',b')` with `E(a,b) = aᵀ T b`.
pub fn chsh_value(t: &Matrix3<f64>, a: &Vector3<f64>, a2: &Vector3<f64>, b: &Vector3<f64>, b2: &Vector3<f64>) -> f64 {
    (a.transpose() * t * (b + b2))[0] + (a2.transpose() * t * (b - b2))[0]
}

fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChshOptimum {
    pub value: f64,
    pub alice: [Vector3<f64>; 2],
    pub bob: [Vector3<f64>; 2],
}

/// For fixed Alice directions the best Bob settings are `b ∝ Tᵀ(a+a')` and
/// `b' ∝ Tᵀ(a−a')`, leaving `|Tᵀ(a+a')| + |Tᵀ(a−a')|`.
fn alice_objective(t: &Matrix3<f64>, x: &[f64]) -> f64 {
    let a = direction(x[0], x[1]);
    let a2 = direction(x[2], x[3]);
    (t.transpose() * (a + a2)).norm() + (t.transpose() * (a - a2)).norm()
}

const GRID: usize = 16;

/// Maximum CHSH value over projective spin measurements: a 16⁴ grid over
/// Alice's two Bloch directions (Bob best-responding in closed form), then
/// Nelder–Mead from the best grid points.
pub fn chsh_max(rho: &Operator) -> Result<ChshOptimum> {
    let t = correlation_matrix(rho)?;
    let thetas: Vec<f64> = (0..GRID).map(|k| (k as f64 + 0.5) * std::f64::consts::PI / GRID as f64).collect();
    let phis: Vec<f64> = (0..GRID).map(|k| k as f64 * 2.0 * std::f64::consts::PI / GRID as f64).collect();
    let mut top: Vec<(f64, [f64; 4])> = Vec::new();
    for &t1 in &thetas {
        for &p1 in &phis {
            for &t2 in &thetas {
                for &p2 in &phis {
                    let x = [t1, p1, t2, p2];
                    let v = alice_objective(&t, &x);
                    if top.len() < 4 || v > top[top.len() - 1].0 {
                        top.push((v, x));
                        top.sort_by(|a, b| b.0.total_cmp(&a.0));
                        top.truncate(4);
                    }
                }
            }
        }
    }
    // Refine in unconstrained 3-vector coordinates (normalized inside the
    // objective), which avoids the coordinate singularity at the poles.
    let unit = |v: Vector3<f64>| if v.norm() > 0.0 { v.normalize() } else { Vector3::z() };
    let vec_objective = |y: &[f64]| {
        let a = unit(Vector3::new(y[0], y[1], y[2]));
        let a2 = unit(Vector3::new(y[3], y[4], y[5]));
        (t.transpose() * (a + a2)).norm() + (t.transpose() * (a - a2)).norm()
    };
    let mut best = (f64::NEG_INFINITY, vec![0.0; 6]);
    for (_, x0) in &top {
        let a = direction(x0[0], x0[1]);
        let a2 = direction(x0[2], x0[3]);
        let y0 = [a.x, a.y, a.z, a2.x, a2.y, a2.z];
        let (y, neg) = nelder_mead(|y| -vec_objective(y), &y0, 0.2, 6000)?;
        if -neg > best.0 {
            best = (-neg, y);
        }
    }
    let y = best.1;
    let a = unit(Vector3::new(y[0], y[1], y[2]));
    let a2 = unit(Vector3::new(y[3], y[4], y[5]));
    let b = unit(t.transpose() * (a + a2));
    let b2 = unit(t.transpose() * (a - a2));
    Ok(ChshOptimum { value: chsh_value(&t, &a, &a2, &b, &b2), alice: [a, a2], bob: [b, b2] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::singlet;
    use crate::qcore::{random_density, CompositeSpace};

    /// Closed-form maximum `2√(λ₁+λ₂)` from the two largest eigenvalues of `TᵀT`.
    fn horodecki(rho: &Operator) -> f64 {
        let t = correlation_matrix(rho).unwrap();
        let mut ev: Vec<f64> = (t.transpose() * t).symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        2.0 * (ev[0] + ev[1]).sqrt()
    }

    #[test]
    fn singlet_reaches_tsirelson() {
        let v = chsh_max(&singlet().density()).unwrap().value;
        assert!((v - 2.0 * 2f64.sqrt()).abs() < 1e-9, "{v}");
    }

    #[test]
    fn matches_closed_form_on_random_states() {
        for seed in 0..5 {
            let rho = random_density(CompositeSpace::qubits(2), 1 + seed as usize % 4, seed).unwrap();
            let v = chsh_max(&rho).unwrap().value;
            assert!((v - horodecki(&rho)).abs() < 1e-8, "seed {seed}: {v} vs {}", horodecki(&rho));
        }
    }
}
