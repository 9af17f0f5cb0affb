use thiserror::Error;

use crate::sdp::SolverStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parameter {name} = {value} outside admissible interval {interval}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        interval: String,
    },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("solver stopped with status {status:?}: {detail}")]
    Solver { status: SolverStatus, detail: String },

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, lo: f64, hi: f64) -> Self {
        Error::InvalidParameter {
            name,
            value,
            interval: format!("[{lo}, {hi}]"),
        }
    }
}
