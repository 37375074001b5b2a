use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the detection pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("differentiator diverged at step {step}: {what}")]
    Diverged { step: usize, what: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("degenerate heading at step {step}: reference vector has zero length")]
    DegenerateHeading { step: usize },

    #[error("error metric undefined at step {step} (window length {delta})")]
    MetricUndefined { step: usize, delta: usize },

    #[error(
        "cutoffs not ready: run has reached step {step}, cutoffs freeze at step {freeze_step}"
    )]
    CutoffsNotReady { step: usize, freeze_step: usize },

    #[error("pipeline order violated: {0}")]
    PipelineOrder(String),

    #[error("{path}:{line}: parse error: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
