use rand::Rng;
use serde::Serialize;

use super::delta::{commutator_functions_with, Method, QuadratureConfig};
use super::interval::{IntervalKind, IntervalPoint};
use crate::error::Result;
use crate::qcore::random::rng_from_seed;

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub kind: IntervalKind,
    pub t: f64,
    pub r: f64,
    pub m: f64,
    pub s2: f64,
    pub antisym_abs: f64,
    pub sym_abs: f64,
}

/// Spacelike points `t = s sinh η`, `r = s cosh η` on a rectangular `(s, η)` grid,
/// repeated for every mass. Endpoints of both ranges are included.
pub fn spacelike_grid(masses: &[f64], s_range: (f64, f64), eta_range: (f64, f64), n_s: usize, n_eta: usize) -> Vec<IntervalPoint> {
    let lin = |(lo, hi): (f64, f64), n: usize, i: usize| {
        if n <= 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let mut points = Vec::with_capacity(masses.len() * n_s * n_eta);
    for &m in masses {
        for i in 0..n_s {
            for j in 0..n_eta {
                let s = lin(s_range, n_s, i);
                let eta = lin(eta_range, n_eta, j);
                points.push(IntervalPoint::from_rapidity(s, eta, m).expect("finite grid point"));
            }
        }
    }
    points
}

/// Spacelike points with `s` uniform in `s_range`, `η` uniform in `eta_range`
/// and `m` drawn from `masses`.
pub fn random_spacelike_points(n: usize, masses: &[f64], s_range: (f64, f64), eta_range: (f64, f64), seed: u64) -> Vec<IntervalPoint> {
    let mut rng = rng_from_seed(seed);
    (0..n)
        .map(|_| {
            let s = rng.random_range(s_range.0..=s_range.1);
            let eta = rng.random_range(eta_range.0..=eta_range.1);
            let m = masses[rng.random_range(0..masses.len())];
            IntervalPoint::from_rapidity(s, eta, m).expect("finite point")
        })
        .collect()
}

pub fn sweep(points: &[IntervalPoint], method: Method, cfg: &QuadratureConfig) -> Result<Vec<SweepRow>> {
    points
        .iter()
        .map(|p| {
            let c = commutator_functions_with(p, method, cfg)?;
            Ok(SweepRow {
                kind: p.kind(),
                t: p.t,
                r: p.r,
                m: p.m,
                s2: p.interval_sq(),
                antisym_abs: c.antisym.norm(),
                sym_abs: c.sym.norm(),
            })
        })
        .collect()
}
