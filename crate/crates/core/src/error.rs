use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("undecided at precision cap: {0}")]
    Undecided(String),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("enumeration of {size} candidates exceeds cap {cap}")]
    EnumerationCap { size: String, cap: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("pole proximity: {0}")]
    PoleProximity(String),

    #[error("unknown identity case `{0}`")]
    UnknownCase(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("store: {0}")]
    Store(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Store(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
