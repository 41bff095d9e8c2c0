//! Dense linear algebra on finite-dimensional composite Hilbert spaces.

pub mod basis;
pub mod circuit;
pub mod gates;
pub mod linalg;
pub mod observable;
pub mod operator;
pub mod random;
pub mod space;
pub mod state;
pub mod textfmt;

pub use basis::Basis;
pub use circuit::{Circuit, Evolution};
pub use observable::{spectral_decomposition, Observable, SpectralComponent, DEFAULT_CLUSTER_TOL};
pub use operator::{partial_trace, tensor_product, Operator};
pub use random::{random_density, random_pure, random_unitary};
pub use space::CompositeSpace;
pub use state::{StateVector, MAX_STATE_DIM};

pub use num_complex::Complex64 as C64;
