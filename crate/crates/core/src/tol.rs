//! Numerical tolerances shared across modules.

pub const HERMITIAN: f64 = 1e-12;
/// Hermiticity gate applied to operators produced by time-dependent evaluation.
pub const HERMITIAN_EVAL: f64 = 1e-10;
pub const UNITARY: f64 = 1e-10;
pub const NORM: f64 = 1e-10;
pub const RECONSTRUCTION: f64 = 1e-9;
pub const DEGENERATE_GAP: f64 = 1e-10;
pub const COUNTERDIABATIC_GAP: f64 = 1e-8;
pub const NORM_DRIFT: f64 = 1e-7;
pub const TRACELESS: f64 = 1e-12;

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;
pub const BRANCH_JUMP: f64 = std::f64::consts::FRAC_PI_2;

/// Amplitude below which a component counts as a node.
pub const NODE_AMPLITUDE: f64 = 1e-6;
/// Amplitude below which the driven integrator refines around a minimum.
pub const REFINE_AMPLITUDE: f64 = 1e-3;
pub const POTENTIAL_CAP: f64 = 1e6;
/// Relative phase sensitivity below which the adiabatic-state conditions no
/// longer determine the phases; such points are bridged and flagged.
pub const PHASE_SENSITIVITY: f64 = 1e-3;
/// Central-difference step for eigenvector derivatives.
pub const EIGENFRAME_STEP: f64 = 1e-2;

pub const PROTOCOL_ALPHA: f64 = 1e-12;
pub const GRID_ALIGNMENT: f64 = 1e-9;
pub const SIMPSON_STEP: f64 = 1e-10;
