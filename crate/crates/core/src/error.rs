use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("did not converge: {0}")]
    Convergence(String),
    #[error("least-squares system is rank deficient: {0}")]
    RankDeficient(String),
    #[error("root is not bracketed: {0}")]
    Bracket(String),
    #[error("potential supports a bound state: {0}")]
    BoundState(String),
    #[error("target is unreachable: {0}")]
    Unreachable(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
