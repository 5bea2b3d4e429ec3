use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid channel matrix: {0}")]
    InvalidChannel(String),
    #[error("parameter ordering violation: {0}")]
    Ordering(String),
    #[error("regime error: {0}")]
    Regime(String),
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix not positive (semi)definite: min eigenvalue {0}")]
    NotPsd(f64),
    #[error("singular matrix")]
    Singular,
    #[error("inconsistent linear system: residual {0}")]
    Inconsistent(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
