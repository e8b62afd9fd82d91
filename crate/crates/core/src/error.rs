use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precision of {0} decimal digits is below the minimum of 10")]
    PrecisionTooLow(u32),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("{what} did not converge within {limit} iterations")]
    NoConvergence { what: &'static str, limit: usize },
    #[error("pole or singularity: {0}")]
    Singular(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
