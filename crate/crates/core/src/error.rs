use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input: {0}")]
    Empty(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),

    #[error("duplicate measure id `{0}`")]
    DuplicateMeasure(String),

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("feature `{feature}` is excluded for domain `{domain}` ({rule})")]
    ExcludedFeature {
        feature: String,
        domain: String,
        rule: String,
    },

    #[error("class `{class}` has {count} members, fewer than {folds} folds")]
    ClassTooSmall {
        class: String,
        count: usize,
        folds: usize,
    },

    #[error("every network was removed by the `{0}` policy")]
    PolicyEmpty(String),

    #[error("stage `{stage}` needs the output of `{missing}`; run `{missing}` first")]
    MissingUpstream { stage: String, missing: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

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
}
