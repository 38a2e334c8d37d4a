use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("point is not in the {set} set (violation {violation:e})")]
    Infeasible { set: &'static str, violation: f64 },
    #[error("{0} does not provide a projection oracle")]
    NoProjection(&'static str),
    #[error("dual set has no strong-convexity modulus, required by {0}")]
    MissingStrongConvexity(&'static str),
    #[error("power iteration stalled after {iterations} iterations (relative residual {residual:e})")]
    PowerIterationStalled { iterations: usize, residual: f64 },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("no gap-evaluated record in the index range {lo}..={hi}")]
    NoEvaluatedRecord { lo: usize, hi: usize },
    #[error("{algorithm} failed at iteration {iteration}: {source}")]
    Solver {
        algorithm: &'static str,
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn check_dim(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { context, expected, got });
    }
    Ok(())
}
