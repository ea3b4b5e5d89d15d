//! Finite-dimensional Hilbert-space primitives.

mod basis;
pub mod linalg;
mod matrix;
mod pauli;
mod spectral;
mod state;

pub use basis::{diagonal_phase_unitary, DiagonalObservableBasis};
pub use matrix::CMatrix;
pub use pauli::{embed, kron, pauli, Axis};
pub use spectral::{eigendecompose, SpectralDecomposition};
pub use state::StateVector;

/// Shorthand for complex numbers over a [`Real`](crate::Real) scalar.
pub type Cx<T> = num_complex::Complex<T>;
