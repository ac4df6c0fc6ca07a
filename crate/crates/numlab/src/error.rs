//! Error type of the numeric lab.

use hopf3_core::CoreError;
use thiserror::Error;

/// Failures of numerical runs.
#[derive(Debug, Error)]
pub enum NumlabError {
    /// The step size fell below the floor (typically near a singular locus).
    #[error("step-size underflow at t = {t}")]
    StepUnderflow {
        /// Time of failure.
        t: f64,
    },
    /// The step budget ran out.
    #[error("step budget exhausted at t = {t}")]
    TooManySteps {
        /// Time of failure.
        t: f64,
    },
    /// The orbit left the domain where the field can be evaluated.
    #[error("orbit left the chart domain at t = {t}")]
    LeftDomain {
        /// Time of failure.
        t: f64,
    },
    /// No return to the section within the time limit.
    #[error("no return to the section before t = {0}")]
    NoReturn(f64),
    /// The section is not transverse to the field at the given point.
    #[error("section not transverse: {0}")]
    NotTransverse(String),
    /// Symbolic stage failure.
    #[error(transparent)]
    Core(#[from] CoreError),
    /// Input or lookup problem.
    #[error("{0}")]
    Input(String),
    /// CSV output failure.
    #[error(transparent)]
    Csv(#[from] csv::Error),
    /// I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Result alias for this crate.
pub type Result<T> = std::result::Result<T, NumlabError>;
