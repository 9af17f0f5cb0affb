use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Solver(_) => 2,
            CliError::Io(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

impl From<qdoeblin::Error> for CliError {
    fn from(e: qdoeblin::Error) -> Self {
        match e {
            qdoeblin::Error::Solver { .. } => CliError::Solver(e.to_string()),
            qdoeblin::Error::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
