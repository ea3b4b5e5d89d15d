//! Worked examples with closed-form reference solutions.

mod checks;
mod decreasing;
pub mod models;
mod result;
mod two_level;
mod two_spin;

pub use checks::{run_cd_check, run_invariant_check, simulate_cd_check, simulate_invariant_check, CdCheckRun, CheckScenario, InvariantCheckRun, TARGET_LEVEL};
pub use decreasing::{decreasing_field_result, run_decreasing_field, DecreasingFieldScenario, FeasibilityReport};
pub use models::{
    decreasing_field_exact, two_level_exact, two_spin_exact, DecreasingFieldExact, DecreasingFieldHamiltonian, FieldEnvelope,
    RotatingFieldHamiltonian, TwoLevelExact, TwoLevelHamiltonian, TwoSpinAdiabatic, TwoSpinExact, TwoSpinHamiltonian,
};
pub use result::{Column, EventRecord, Outcome, ScenarioResult};
pub use two_level::{run_two_level, simulate_two_level, FastForwardRun, TwoLevelScenario};
pub use two_spin::{run_two_spin, simulate_two_spin, TwoSpinScenario};
