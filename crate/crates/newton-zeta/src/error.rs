//! Crate-wide error type.
//!
//! Every fallible public operation returns [`Result`]. `Inconsistent` is
//! reserved for internal cross-check failures (two independent routes to the
//! same value disagreeing); it is a hard error, never downgraded to a warning.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed polynomial text or problem file.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally invalid input (dimension mismatch, empty support, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A mathematical hypothesis required by the requested computation fails.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    /// An enumeration exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Two independent computation routes disagreed.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
