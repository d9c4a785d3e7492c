use thiserror::Error;

/// Crate-wide error type.
///
/// Variants map onto the CLI exit codes: `Io` exits 1, `Schema` exits 2,
/// everything else exits 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid instrument: {0}")]
    InvalidInstrument(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
