//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any operation in this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Argument outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input while parsing a frequency table.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The same x value appeared twice in a frequency table.
    #[error("duplicate x value {0} in frequency table")]
    DuplicateX(u32),

    /// No data rows were found.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A truncation removed every point.
    #[error("empty result: no points at or below x = {0}")]
    EmptyResult(u32),

    /// Distribution parameters violate the parameter space.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The input has no information for the requested fit.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// An iterative fit failed to converge.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The cutoff likelihood maximizer ran into the β = 0 boundary.
    #[error("boundary: maximizer ran to beta -> 0-; fit the power law instead")]
    Boundary,

    /// A likelihood-ratio pair is not nested (alternative fits worse).
    #[error("nesting violation: alternative log-likelihood {alt} below null {null}")]
    NestingViolation { null: f64, alt: f64 },

    /// A fit passed to a test had not converged.
    #[error("fit did not converge: {0}")]
    NotConverged(String),

    /// A computation would exceed an internal resource cap.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
