use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown tag {0:?}")]
    UnknownTag(String),

    #[error("input is not valid UTF-8: {0}")]
    Utf8(#[from] std::str::Utf8Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: line {line}: {source}")]
    Json {
        context: String,
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    #[error("duplicate {kind} {name:?} in snapshot (line {line})")]
    DuplicateNode {
        kind: &'static str,
        name: String,
        line: usize,
    },

    #[error("none of the seed categories exist in the snapshot: {0:?}")]
    NoSeeds(Vec<String>),

    #[error("sentence {sentence}: {msg}")]
    Alignment { sentence: usize, msg: String },

    #[error("sentence {sentence}, token {token}: surface mismatch ({left:?} vs {right:?})")]
    TokenMismatch {
        sentence: usize,
        token: usize,
        left: String,
        right: String,
    },

    #[error("token {0} has no lemma")]
    MissingLemma(usize),

    #[error("entry {surface:?}: {msg}")]
    InvalidEntry { surface: String, msg: String },

    #[error("invalid split ratios: {0}")]
    InvalidRatios(String),

    #[error("{0}")]
    Other(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
