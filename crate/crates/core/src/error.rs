use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("qubit count {0} outside supported range {1}..={2}")]
    SizeOutOfRange(usize, usize, usize),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("not distillable at this rate: {0}")]
    NotDistillable(String),
    #[error("unknown builtin code `{0}`")]
    UnknownBuiltin(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
