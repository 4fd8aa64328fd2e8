//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Configuration file could not be parsed.
    #[error("config parse error at line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    /// A parsed configuration violates a cross-field invariant.
    #[error("config validation error: {0}")]
    ConfigValidation(String),

    /// An operation received a physically invalid input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Root bracketing failed: no sign change over the search interval.
    #[error("no root of {what} bracketed in [{lo}, {hi}]")]
    BracketNotFound { what: String, lo: f64, hi: f64 },

    /// The adaptive integrator under-flowed its step size.
    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    /// A sweep aborted; the failing grid point is identified.
    #[error("sweep failed at {point}: {source}")]
    Sweep {
        point: String,
        #[source]
        source: Box<Error>,
    },

    /// A detection window falls outside the trajectory span.
    #[error("detection window [{t0}, {tf}] outside trajectory span [{span_lo}, {span_hi}]")]
    WindowOutOfRange { t0: f64, tf: f64, span_lo: f64, span_hi: f64 },

    /// I/O failure while reading or writing artifacts.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON encoding/decoding failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
