use thiserror::Error;

/// Errors raised by the solver, schedule, and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector has non-finite coordinate at index {index}")]
    NonFiniteInput { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("schedule invalid: {0}")]
    InvalidSchedule(String),

    #[error("non-finite iterate at k = {k}")]
    NonFiniteIterate {
        k: usize,
        /// Rows produced up to and including the offending one.
        trace: Box<crate::solver::Trace>,
    },

    #[error("trace lacks vector snapshots at k = {k}; rerun with snapshot_every = 1")]
    MissingSnapshots { k: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
