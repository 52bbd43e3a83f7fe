use std::path::PathBuf;

use crate::corpus::EmotionClass;
use crate::ids::MovieId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}: {source}")]
    Csv {
        file: String,
        #[source]
        source: csv::Error,
    },

    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: u64, msg: String },

    #[error("class {class} has {have} records, {need} required")]
    InsufficientData {
        class: EmotionClass,
        have: usize,
        need: usize,
    },

    #[error("invalid emotion vector: {0}")]
    InvalidVector(String),

    #[error("duplicate key {0}")]
    DuplicateKey(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("movie {0} is not in the model")]
    UnknownMovie(MovieId),

    #[error("user {0} is not in the model")]
    UnknownUser(crate::ids::UserId),

    #[error("movie {0} has no emotion vector")]
    MissingMvec(MovieId),

    #[error("cosine similarity undefined for a zero-norm vector")]
    ZeroNorm,

    #[error("correlation undefined for a constant vector")]
    UndefinedCorrelation,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no eligible users{0}")]
    NoEligibleUsers(String),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(file: impl Into<String>, source: csv::Error) -> Self {
        Error::Csv {
            file: file.into(),
            source,
        }
    }

    pub(crate) fn parse(file: impl Into<String>, line: u64, msg: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            msg: msg.into(),
        }
    }
}
