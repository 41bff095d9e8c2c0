use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::bessel::bessel_k1;
use super::interval::{IntervalKind, IntervalPoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_form" | "closed-form" => Ok(Method::ClosedForm),
            "quadrature" => Ok(Method::Quadrature),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// Regulator ladder and tolerances for the radial integral.
///
/// The damping factors are `eps, eps/2, …, eps/2^(levels−1)`. Six levels
/// are needed for ~1e-9 relative accuracy: the regulated value has a full
/// power series in `ε`, and three levels leave errors near 1e-4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub eps: f64,
    pub levels: usize,
    /// Bound on the discarded tail `∫_{p_max}^∞` of the smallest-ε integrand.
    pub tail_tol: f64,
    /// Absolute `|K15 − G7|` above which a panel is bisected.
    pub panel_tol: f64,
    /// Relative gap between the last two extrapolants treated as non-convergence.
    pub convergence_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            eps: 1e-2,
            levels: 6,
            tail_tol: 1e-12,
            panel_tol: 1e-11,
            convergence_tol: 1e-6,
        }
    }
}

impl QuadratureConfig {
    pub fn with_eps(eps: f64) -> Self {
        Self { eps, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutatorValues {
    /// `Δ₊(t, r) − Δ₊(−t, r)`.
    pub antisym: C64,
    /// `Δ₊(t, r) + Δ₊(−t, r)`.
    pub sym: C64,
}

/// `Δ₊` at the given separation, in natural units.
///
/// `eps` is the largest damping factor of the quadrature ladder and is
/// ignored by the closed form.
pub fn delta_plus(p: &IntervalPoint, method: Method, eps: f64) -> Result<C64> {
    delta_plus_with(p, method, &QuadratureConfig::with_eps(eps))
}

pub fn delta_plus_with(p: &IntervalPoint, method: Method, cfg: &QuadratureConfig) -> Result<C64> {
    if p.kind() == IntervalKind::Lightlike {
        return Err(Error::Lightlike { t: p.t, r: p.r });
    }
    match method {
        Method::ClosedForm => closed_form(p),
        Method::Quadrature => quadrature(p, cfg),
    }
}

/// `(Δ₊(t, r), Δ₊(−t, r))`.
pub fn delta_plus_pair(p: &IntervalPoint, method: Method, cfg: &QuadratureConfig) -> Result<(C64, C64)> {
    let forward = delta_plus_with(p, method, cfg)?;
    let backward = match method {
        // The regulated integrand at −t is the complex conjugate of the one at t.
        Method::Quadrature => forward.conj(),
        Method::ClosedForm => delta_plus_with(&p.time_reversed(), method, cfg)?,
    };
    Ok((forward, backward))
}

pub fn commutator_functions(p: &IntervalPoint, method: Method, eps: f64) -> Result<CommutatorValues> {
    commutator_functions_with(p, method, &QuadratureConfig::with_eps(eps))
}

pub fn commutator_functions_with(
    p: &IntervalPoint,
    method: Method,
    cfg: &QuadratureConfig,
) -> Result<CommutatorValues> {
    let (forward, backward) = delta_plus_pair(p, method, cfg)?;
    Ok(CommutatorValues {
        antisym: forward - backward,
        sym: forward + backward,
    })
}

fn closed_form(p: &IntervalPoint) -> Result<C64> {
    let s2 = p.interval_sq();
    if p.m == 0.0 {
        // Off the light cone the iε prescription only matters through a
        // distribution supported on it.
        return Ok(C64::new(1.0 / (4.0 * PI * PI * s2), 0.0));
    }
    match p.kind() {
        IntervalKind::Spacelike => {
            let s = s2.sqrt();
            Ok(C64::new(p.m * bessel_k1(p.m * s) / (4.0 * PI * PI * s), 0.0))
        }
        _ => Err(Error::ClosedFormUnavailable(format!(
            "massive timelike point t = {}, r = {}, m = {}",
            p.t, p.r, p.m
        ))),
    }
}

// Published Gauss–Kronrod nodes and weights, kept at full listed precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_LEVELS: usize = 10;
const MAX_DEPTH: u32 = 12;

struct Radial {
    t: f64,
    r: f64,
    m: f64,
    eps_min: f64,
    levels: usize,
    panel_tol: f64,
}

impl Radial {
    /// `p sin(pr)/(r E) · e^{−iEt}` (or its `r → 0` limit) and `e^{−ε_min p}`.
    fn integrand(&self, p: f64) -> (C64, f64) {
        let e = (p * p + self.m * self.m).sqrt();
        let radial = if self.r > 0.0 { (p * self.r).sin() / self.r } else { p };
        let ratio = if e > 0.0 { p / e } else { 1.0 };
        let (s, c) = (e * self.t).sin_cos();
        (C64::new(c, -s) * (ratio * radial), (-self.eps_min * p).exp())
    }

    /// Adds the K15 integral over `[a, b]` for every damping level into `acc`.
    /// `acc[0]` is the smallest ε; level `k` uses the damping `x^(2^k)`.
    fn panel(&self, a: f64, b: f64, depth: u32, acc: &mut [C64; MAX_LEVELS]) -> u32 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut k = [C64::new(0.0, 0.0); MAX_LEVELS];
        let mut g = C64::new(0.0, 0.0);
        for j in 0..15 {
            let (idx, sign) = if j < 8 { (j, -1.0) } else { (14 - j, 1.0) };
            if j == 7 && sign > 0.0 {
                continue;
            }
            let p = mid + sign * half * XGK[idx];
            let (f, x) = self.integrand(p);
            let mut damp = x;
            for kk in k.iter_mut().take(self.levels) {
                *kk += f * (WGK[idx] * damp);
                damp *= damp;
            }
            if idx % 2 == 1 {
                g += f * (WG[idx / 2] * x);
            }
        }
        if ((k[0] - g) * half).norm() > self.panel_tol && depth < MAX_DEPTH {
            return self.panel(a, mid, depth + 1, acc) + self.panel(mid, b, depth + 1, acc);
        }
        for (out, v) in acc.iter_mut().zip(k.iter()).take(self.levels) {
            *out += v * half;
        }
        1
    }
}

fn quadrature(p: &IntervalPoint, cfg: &QuadratureConfig) -> Result<C64> {
    if !(cfg.eps > 0.0) || cfg.levels < 2 || cfg.levels > MAX_LEVELS {
        return Err(Error::InvalidParameter(format!(
            "quadrature needs eps > 0 and 2..={MAX_LEVELS} levels, got eps = {}, levels = {}",
            cfg.eps, cfg.levels
        )));
    }
    let eps_min = cfg.eps / f64::powi(2.0, cfg.levels as i32 - 1);
    let radial = Radial {
        t: p.t,
        r: p.r,
        m: p.m,
        eps_min,
        levels: cfg.levels,
        panel_tol: cfg.panel_tol,
    };

    // |p sin(pr)/(rE)| ≤ min(p, 1/r), so the tail beyond p_max is at most
    // e^{−ε p_max}(p_max + 1/ε)/(ε r_eff) before the 1/(4π²) prefactor.
    let inv_r = if p.r > 0.0 { 1.0 / p.r } else { f64::INFINITY };
    let mut p_max = 10.0 / eps_min;
    loop {
        let bound = (-eps_min * p_max).exp() * (p_max + 1.0 / eps_min).min(inv_r) / eps_min / (4.0 * PI * PI);
        if bound < cfg.tail_tol || p_max > 1e4 / eps_min {
            break;
        }
        p_max += 1.0 / eps_min;
    }

    // Half a period of the fastest oscillation per panel. Whole periods are
    // twice as fast but lose an order of magnitude after extrapolation.
    let width = PI / (p.r + p.t.abs()).max(1.0);
    let panels = (p_max / width).ceil() as usize;
    let mut acc = [C64::new(0.0, 0.0); MAX_LEVELS];
    for i in 0..panels {
        radial.panel(i as f64 * width, (i + 1) as f64 * width, 0, &mut acc);
    }

    let norm = 1.0 / (4.0 * PI * PI);
    // Row 0 of the Neville table, largest ε first.
    let mut table: Vec<C64> = (0..cfg.levels).rev().map(|k| acc[k] * norm).collect();
    let mut previous = table[cfg.levels - 2];
    for step in 1..cfg.levels {
        let factor = f64::powi(2.0, step as i32);
        for i in 0..cfg.levels - step {
            table[i] = (table[i + 1] * factor - table[i]) / (factor - 1.0);
        }
        if step == cfg.levels - 2 {
            previous = table[1];
        }
    }
    let value = table[0];
    let gap = (value - previous).norm();
    if !value.is_finite() || gap > cfg.convergence_tol * value.norm() + 1e-14 {
        return Err(Error::NonConvergence(format!(
            "Δ₊ quadrature at t = {}, r = {}, m = {}: extrapolants differ by {gap:.3e} (value {value:.6e}, eps = {}, {} levels, p_max = {p_max:.3e}, {panels} panels)",
            p.t, p.r, p.m, cfg.eps, cfg.levels
        )));
    }
    Ok(value)
}
