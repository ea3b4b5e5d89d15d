//! Counterdiabatic driving, Lewis–Riesenfeld invariants and the fast-forward
//! conditions for adiabatic target states.

mod adiabatic;
mod conditions;
mod invariant;

pub use adiabatic::{cd_two_level, counterdiabatic_term, deformed_cd, AdiabaticModel, EigenFrame, TransitionlessHamiltonian};
pub use conditions::{ff_conditions_solve, FFConditionSolution};
pub use invariant::{lr_build, lr_ff_check, lr_ff_residuals, LRInvariant};
