use thiserror::Error;

/// Failures raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator is not Hermitian (max |M - M^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("operator is not unitary (max |U^dagger U - I| = {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("state is not normalized (| |psi|^2 - 1 | = {deviation:e})")]
    NotNormalized { deviation: f64 },
    #[error("index {index} out of range for dimension {dim}")]
    InvalidIndex { index: usize, dim: usize },
    #[error("invalid observable basis: {0}")]
    InvalidBasis(String),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("time {t} is outside the sampled domain")]
    OutOfDomain { t: f64 },
    #[error("norm drift {drift:e} exceeds the integration quality gate")]
    IntegrationQuality { drift: f64 },
    #[error("invalid magnification protocol: {0}")]
    InvalidProtocol(String),
    #[error("no real phase solution at t = {t}: {reason}")]
    Infeasible { t: f64, reason: String },
    #[error("phase branch lost at t = {t} (jump {jump})")]
    BranchLoss { t: f64, jump: f64 },
    #[error("degenerate spectrum at t = {t} (gap {gap:e})")]
    DegenerateSpectrum { t: f64, gap: f64 },
    #[error("field vanishes at t = {t}")]
    VanishingField { t: f64 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
