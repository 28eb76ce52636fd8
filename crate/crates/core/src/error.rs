use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("near tie in ray comparison at coefficient of degree {degree}; perturb theta")]
    NearTie { degree: usize },
    #[error("invalid tower: {0}")]
    Tower(String),
    #[error("operator error: {0}")]
    Operator(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("exponential part has multiplicity {0}; log-bearing formal solutions are not constructed")]
    UnsupportedLog(usize),
    #[error("approximate exponential parts (characteristic roots outside Q(i))")]
    Approximate,
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("configuration error: {0}")]
    Config(String),
}
