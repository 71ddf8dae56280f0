use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing metadata field `{0}`")]
    MissingMetadata(&'static str),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("test function support radius {support} exceeds the dataset cutoff {cutoff}")]
    SupportExceedsCutoff { support: f64, cutoff: f64 },

    #[error("dataset metadata mismatch: {0}")]
    MetadataMismatch(String),

    #[error("unsupported Coxeter symbol [{p},{q},{r}]: {reason}")]
    UnsupportedSymbol {
        p: u32,
        q: u32,
        r: u32,
        reason: String,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("certification refused: {0}")]
    Refused(String),

    #[error("inconsistent character data: {0}")]
    Characters(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
