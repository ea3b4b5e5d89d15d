//! Fast-forward scaling of finite-dimensional quantum dynamics.
//!
//! A known solution of a time-dependent Schrödinger equation is replayed at a
//! user-chosen speed by adding diagonal phase transformations and a real
//! diagonal acceleration potential. The crate builds those potentials, checks
//! them against counterdiabatic driving and dynamical invariants, and ships the
//! benchmark models and a command-line driver.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod ffscale;
pub mod qcore;
pub mod scalar;
pub mod scenarios;
pub mod shortcuts;
pub mod tol;

pub use error::{Error, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type Matrix = qcore::CMatrix<f64>;
pub type State = qcore::StateVector<f64>;
pub type Grid = dynamics::TimeGrid<f64>;
pub type Basis = qcore::DiagonalObservableBasis<f64>;
pub type Phases = ffscale::PhaseTrajectory<f64>;
pub type Potential = ffscale::AccelerationPotential<f64>;
pub type Map = ffscale::ScalingMap<f64>;
