//! Error taxonomy shared by every stage.

use std::path::PathBuf;

/// Errors produced by the detection pipeline, IO layers, and metrics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// File could not be read or written.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Input bytes are not a supported image or are malformed.
    #[error("format error in {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    /// Configuration is inconsistent (bad values, mismatched sizes or ids).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with arguments violating its contract.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A region's offset votes cancel and no tangent can be elected.
    #[error("degenerate region: {0}")]
    DegenerateRegion(String),

    /// A metric has no defined value for the given inputs.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// Scene generation could not place the requested geometry.
    #[error("capacity error: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
