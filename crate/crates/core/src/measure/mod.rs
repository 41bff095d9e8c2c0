//! Measurement channels and decoherence predicates.

pub mod channel;
pub mod eta;
pub mod process;

pub use channel::{nonselective_measure, outcome_probabilities, selective_measure};
pub use eta::{decoherence_eta, is_diagonal_in, is_recorded, offdiagonal_in, EtaReport, DEFAULT_WEIGHT_THRESHOLD};
pub use process::{conservation_defects, is_conserved_basis, is_measurement_process, MeasurementProcessReport};
