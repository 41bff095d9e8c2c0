//! No-signaling conditions, unitary factorization and the signaling game.

pub mod factorize;
pub mod game;
pub mod nosignal;
pub mod witness;

pub use factorize::{factorize_unitary, FactorizationResult};
pub use game::{signaling_game, Channel, ChannelStep, SignalingOutcome};
pub use nosignal::{bob_marginal, check_c, check_mc, ViolationReport};
pub use witness::{mc_implies_f_witness, WitnessSearch, FACTORIZED_BELOW};
