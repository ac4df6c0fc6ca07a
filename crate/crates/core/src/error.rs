//! Error type of the symbolic pipeline.

use hopf3_algebra::AlgebraError;
use thiserror::Error;

/// Failures raised by the normal-form, blow-up, planar and Poincaré stages.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    /// Exact-arithmetic failure.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// The linear part does not have the spectrum `{±bi, c}` with `b ≠ 0`.
    #[error("not a Hopf singularity: {0}")]
    NotHopf(String),
    /// The third eigenvalue is nonzero; only zero-Hopf singularities are analyzed symbolically.
    #[error("semi-hyperbolic singularity (c = {0})")]
    SemiHyperbolic(String),
    /// Malformed input data.
    #[error("invalid input: {0}")]
    Input(String),
    /// A blow-up or escalation budget ran out.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    /// A decision could not be reached from the available jets.
    #[error("undetermined: {0}")]
    Undetermined(String),
    /// The requested element or chart does not exist.
    #[error("unknown element: {0}")]
    UnknownElement(String),
    /// An internal consistency check failed.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, CoreError>;
