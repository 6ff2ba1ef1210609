use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("token position {position} out of range for a sentence of {len} tokens")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("invalid replacement {0:?}: must be non-empty and contain no whitespace")]
    InvalidReplacement(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("masked language model: {0}")]
    Backend(String),

    #[error(
        "input of {len} subword tokens exceeds the model limit of {max}; truncate the context window"
    )]
    SequenceTooLong { len: usize, max: usize },

    #[error("only {found} whole-word predictions among the top {scanned} subwords (wanted {wanted})")]
    InsufficientWholeWords {
        wanted: usize,
        found: usize,
        scanned: usize,
    },

    #[error("cannot rank an empty candidate set")]
    NoCandidates,

    #[error("feature {feature} has {got} scores for {expected} candidates")]
    FeatureLength {
        feature: &'static str,
        got: usize,
        expected: usize,
    },

    #[error("at token {position}: {source}")]
    AtPosition {
        position: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Dataset(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn at(self, position: usize) -> Self {
        Error::AtPosition {
            position,
            source: Box::new(self),
        }
    }
}
