//! Fast-forward construction: scaling maps, phase conditions, acceleration
//! potentials and node detection.

mod hamiltonian;
pub mod newton;
mod phase;
mod potential;
mod protocol;
mod singularity;

pub use hamiltonian::{assemble as assemble_ff, ff_hamiltonian, ff_state, FastForwardHamiltonian};
pub use phase::{bridge as bridge_samples, solve_phase_condition, PhaseProblem, PhaseTrajectory};
pub use potential::{gauge_eliminate, residual_potential, synthesize_potential, AccelerationPotential, PotentialField, ResidualPotential};
pub use protocol::{magnification, scaling_map, MagnificationProtocol, ScalingMap};
pub use singularity::{detect_singularity, find_nodes, NodeEvent};
