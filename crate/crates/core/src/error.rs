use thiserror::Error;

/// Failure categories shared by the library, the CLI and the C ABI.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameters are individually valid but do not form a usable configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// A gate failed validation (non-unitary matrix, malformed record).
    #[error("validation error: {0}")]
    Validation(String),
    /// A wire or address index is out of range or collides with another.
    #[error("index error: {0}")]
    Index(String),
    /// The request exceeds a resource budget (simulation width, precision cap).
    #[error("resource error: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! bail {
    ($kind:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$kind(format!($($arg)*)))
    };
}
pub(crate) use bail;
