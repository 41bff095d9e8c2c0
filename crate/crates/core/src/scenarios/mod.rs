//! Executable thought experiments, each producing a [`ScenarioReport`].

pub mod bell;
pub mod chsh;
pub mod explorer;
pub mod friend;
pub mod nonlocal;
pub mod report;
pub mod revival;

pub use bell::{bell_recording, BellRecordingParams};
pub use chsh::{chsh_max, correlation_matrix};
pub use friend::{wigner_friend, FriendParams};
pub use report::{BranchInfo, Observation, Quantity, ScenarioReport};
pub use revival::coherence_revival;
pub use nonlocal::{aharonov_albert_jz, jsq_signaling, jx_then_jz, jx_then_jz_split, two_spin_state, JsqParams};
pub use explorer::{explorer_report, recordable_basis_explorer, ExplorerOutcome, ExplorerParams};
