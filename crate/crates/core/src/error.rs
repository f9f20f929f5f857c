use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    /// The eigensolver exhausted its iteration budget.
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    Solver { iterations: usize, residual: f64 },

    #[error("chain stuck at step {step} after {attempts} attempts (last rejection: {reason})")]
    StuckChain {
        step: usize,
        attempts: usize,
        reason: String,
    },

    #[error("ensemble member {index}: {source}")]
    Ensemble {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures that happen while a chain is running (as opposed to
    /// bad input), which the CLI reports with a distinct exit code.
    pub fn is_runtime(&self) -> bool {
        match self {
            Error::Solver { .. } | Error::StuckChain { .. } => true,
            Error::Ensemble { source, .. } => source.is_runtime(),
            _ => false,
        }
    }
}
