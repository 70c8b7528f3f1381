use thiserror::Error;

/// Errors raised by the library. Each variant maps to one CLI exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("size cap exceeded: {what} needs {requested}, limit is {limit}")]
    SizeCap {
        what: String,
        requested: f64,
        limit: f64,
    },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("no termination: {0}")]
    NonTermination(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

pub(crate) fn check_cap(what: &str, requested: f64, limit: f64) -> Result<()> {
    if requested > limit {
        Err(Error::SizeCap {
            what: what.to_string(),
            requested,
            limit,
        })
    } else {
        Ok(())
    }
}
