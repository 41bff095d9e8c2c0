//! Finite-dimensional laboratory for measurement channels, decoherence,
//! no-signaling checks and free-field two-point functions.

pub mod acceptance;
pub mod error;
pub mod fieldnum;
pub mod measure;
pub mod optimize;
pub mod qcore;
pub mod relcheck;
pub mod scenarios;
pub mod seed;

pub use error::{Error, Result};
