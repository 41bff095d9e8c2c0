use thiserror::Error;

/// Errors raised by the simulation library.
///
/// Contract violations (bad factor indices, dimension mismatches) are reported
/// as errors rather than panics so that the CLI can surface them as usage errors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid factor selection: {0}")]
    InvalidFactors(String),

    #[error("operator is not hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("basis is not orthonormal (defect {defect:.3e})")]
    NotOrthonormal { defect: f64 },

    #[error("{value} is not an eigenvalue of the observable")]
    UnknownOutcome { value: f64 },

    #[error("impossible outcome {outcome}: Born probability {probability:.3e}")]
    ImpossibleOutcome { outcome: f64, probability: f64 },

    #[error("invalid tensor split {d1}x{d2} for an operator of dimension {dim}")]
    InvalidSplit { d1: usize, d2: usize, dim: usize },

    #[error("rank {rank} is not attainable in dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("lightlike separation (t = {t}, r = {r}) is a distributional singularity")]
    Lightlike { t: f64, r: f64 },

    #[error("closed form unavailable: {0}")]
    ClosedFormUnavailable(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
