use serde::Serialize;

use crate::error::{Error, Result};

/// Relative distance to the light cone below which a point is lightlike.
pub const LIGHTLIKE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalKind {
    Spacelike,
    Timelike,
    Lightlike,
}

impl std::fmt::Display for IntervalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            IntervalKind::Spacelike => "spacelike",
            IntervalKind::Timelike => "timelike",
            IntervalKind::Lightlike => "lightlike",
        })
    }
}

/// Displacement `(t, r)` in natural units together with the field mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalPoint {
    pub t: f64,
    pub r: f64,
    pub m: f64,
}

impl IntervalPoint {
    pub fn new(t: f64, r: f64, m: f64) -> Result<Self> {
        if !(t.is_finite() && r.is_finite() && m.is_finite()) {
            return Err(Error::InvalidParameter("interval coordinates and mass must be finite".into()));
        }
        if r < 0.0 || m < 0.0 {
            return Err(Error::InvalidParameter(format!("need r ≥ 0 and m ≥ 0, got r = {r}, m = {m}")));
        }
        Ok(Self { t, r, m })
    }

    /// Spacelike point at proper distance `s` and rapidity `eta`: `t = s sinh η`, `r = s cosh η`.
    pub fn from_rapidity(s: f64, eta: f64, m: f64) -> Result<Self> {
        Self::new(s * eta.sinh(), s * eta.cosh(), m)
    }

    /// `r² − t²`.
    pub fn interval_sq(&self) -> f64 {
        (self.r - self.t.abs()) * (self.r + self.t.abs())
    }

    pub fn kind(&self) -> IntervalKind {
        let gap = self.r - self.t.abs();
        if gap.abs() <= LIGHTLIKE_TOL * self.r.max(self.t.abs()).max(1.0) {
            IntervalKind::Lightlike
        } else if gap > 0.0 {
            IntervalKind::Spacelike
        } else {
            IntervalKind::Timelike
        }
    }

    /// The point with `t → −t`.
    pub fn time_reversed(&self) -> Self {
        Self { t: -self.t, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(IntervalPoint::new(0.5, 1.0, 1.0).unwrap().kind(), IntervalKind::Spacelike);
        assert_eq!(IntervalPoint::new(-2.0, 0.5, 1.0).unwrap().kind(), IntervalKind::Timelike);
        assert_eq!(IntervalPoint::new(1.0, 1.0, 1.0).unwrap().kind(), IntervalKind::Lightlike);
        assert!(IntervalPoint::new(0.0, -1.0, 1.0).is_err());
        let p = IntervalPoint::from_rapidity(1.5, 0.8, 1.0).unwrap();
        assert!((p.interval_sq() - 2.25).abs() < 1e-12);
    }
}
