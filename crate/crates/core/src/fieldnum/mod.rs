//! The free scalar two-point function `Δ₊` and its commutator/anticommutator
//! combinations.

pub mod bessel;
pub mod delta;
pub mod interval;
pub mod sweep;

pub use bessel::bessel_k1;
pub use delta::{
    commutator_functions, commutator_functions_with, delta_plus, delta_plus_pair, delta_plus_with, CommutatorValues, Method,
    QuadratureConfig,
};
pub use interval::{IntervalKind, IntervalPoint};
pub use sweep::{random_spacelike_points, spacelike_grid, sweep, SweepRow};
