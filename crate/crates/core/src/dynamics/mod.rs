//! Schrödinger-equation integration and trajectory diagnostics.

mod evolve;
mod grid;
mod operator;

pub use evolve::{evolve, evolve_driven, fidelity, population, DiagonalDrive, Refinement, Trajectory};
pub use grid::TimeGrid;
pub use operator::{checked_evaluate, FnOperator, FnPath, StatePath, TimeDependentOperator};
