//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by model construction, linear algebra, and integration.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver failed to converge.
    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    /// Time integration failed (step underflow, norm drift, ...).
    #[error("integration failure at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    /// A requested spectral feature or branch does not exist.
    #[error("not found: {0}")]
    NotFound(String),

    /// I/O error while persisting results.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Malformed configuration file or value.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for constructing a domain error.
pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
