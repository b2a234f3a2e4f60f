//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the modelling and fitting routines.
///
/// The split mirrors how callers are expected to react: `Domain`,
/// `Precondition`, and `Usage` indicate bad inputs, while `Numerical`,
/// `FitFailed`, and `IllConditioned` indicate that a computation could not
/// be carried out reliably.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A physical-validity precondition is violated (e.g. bath/doublet
    /// scale separation).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The call itself is malformed (empty grid, bad initialisation, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A numerical routine failed to reach its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A least-squares fit did not converge.
    #[error("fit failed: {0}")]
    FitFailed(String),

    /// The normal matrix of a fit is singular or effectively so.
    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    /// Malformed input data (CSV rows, tables).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
