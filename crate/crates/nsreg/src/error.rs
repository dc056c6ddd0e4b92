//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value {value} at flat index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inadmissible exponents: violated constraint {0}")]
    Inadmissible(String),

    #[error("CFL violation: measured CFL number {measured} exceeds limit {limit}")]
    CflViolation { measured: f64, limit: f64 },

    #[error("non-finite field detected at step {step}")]
    NumericalBlowup { step: u64 },

    #[error("degenerate field: {0}")]
    Degenerate(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("snapshot format error: {0}")]
    SnapshotFormat(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 config/usage, 3 numerical, 4 i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::InvalidArgument(_)
            | Error::Inadmissible(_)
            | Error::InvalidGrid(_)
            | Error::GridMismatch(_) => 2,
            Error::CflViolation { .. }
            | Error::NumericalBlowup { .. }
            | Error::NonFinite { .. }
            | Error::Degenerate(_) => 3,
            Error::Io(_) | Error::SnapshotFormat(_) => 4,
        }
    }

    /// Short machine-readable kind tag used in the CLI's error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "invalid_grid",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::NonFinite { .. } => "non_finite",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Inadmissible(_) => "inadmissible",
            Error::CflViolation { .. } => "cfl_violation",
            Error::NumericalBlowup { .. } => "numerical_blowup",
            Error::Degenerate(_) => "degenerate",
            Error::Config(_) => "config",
            Error::SnapshotFormat(_) => "snapshot_format",
            Error::Io(_) => "io",
        }
    }
}
