use thiserror::Error;

/// Harness failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("{0}")]
    Solver(saddlefw::Error),
    #[error("{0}")]
    Failed(String),
}

impl HarnessError {
    /// 2 for invalid input, 1 for failures while running or checking.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Schema(_) => 2,
            HarnessError::Solver(_) | HarnessError::Failed(_) => 1,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        HarnessError::Config(msg.into())
    }
}

/// Errors raised inside the iteration loop are solver failures; everything
/// else comes from validation and is a configuration problem.
impl From<saddlefw::Error> for HarnessError {
    fn from(e: saddlefw::Error) -> Self {
        match e {
            saddlefw::Error::Solver { .. } => HarnessError::Solver(e),
            other => HarnessError::Config(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
