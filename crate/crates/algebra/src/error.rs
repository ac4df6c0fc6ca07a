//! Error type shared by the exact-arithmetic layer.

use thiserror::Error;

/// Failures raised by exact arithmetic and series bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Two series were combined over different variable lists.
    #[error("variable list mismatch: {0}")]
    VariableMismatch(String),
    /// A jet was requested beyond the order through which the series is trustworthy.
    #[error("requested order {requested} exceeds trustworthy order {available}")]
    OrderExceeded {
        /// Requested order.
        requested: u32,
        /// Order actually available.
        available: u32,
    },
    /// Inversion of a series whose leading part is not a unit.
    #[error("series is not a unit: {0}")]
    NotUnit(String),
    /// Translation along a truncated (distinguished) variable.
    #[error("cannot translate along truncated variable `{0}`")]
    TruncatedTranslation(String),
    /// Operation on the zero polynomial where a nonzero one is required.
    #[error("zero polynomial")]
    ZeroPolynomial,
    /// An exact division left a remainder.
    #[error("inexact division: {0}")]
    InexactDivision(String),
    /// Two algebraic numbers live in incompatible number fields.
    #[error("incompatible algebraic number fields")]
    IncompatibleFields,
    /// A real root lies outside the current number field (nested extensions are not supported).
    #[error("algebraic extension tower exceeded: {0}")]
    TowerExceeded(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// A certified numeric bound could not be established.
    #[error("certification failed: {0}")]
    Certification(String),
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, AlgebraError>;
