use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("unknown neuron `{0}`")]
    UnknownNeuron(String),

    #[error("index {index} out of range for {what} of size {len}")]
    OutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid view: {0}")]
    InvalidView(String),

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("prediction key sets differ; only in left: {only_left:?}, only in right: {only_right:?}")]
    KeyMismatch {
        only_left: Vec<String>,
        only_right: Vec<String>,
    },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("too few points: need at least 2, got {0}")]
    TooFewPoints(usize),

    #[error("class sets are not aligned: {0}")]
    Misaligned(String),

    #[error("attribute layout violation: {0}")]
    Layout(String),

    #[error("invalid metric-measure space: {0}")]
    InvalidSpace(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("target `{0}` has empty extent")]
    EmptyTarget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }
}
