use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence `{0}` is empty")]
    EmptySequence(String),

    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),

    #[error("invalid scoring scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid engine tuning: {0}")]
    InvalidTuning(String),

    #[error("subject chunk of {len} symbols does not fit a stage of width {width}")]
    ChunkOverflow { len: usize, width: usize },

    #[error("sequence lengths {m}+{n} exceed the score range bound for this scheme")]
    LengthOverflow { m: usize, n: usize },

    #[error("pair lengths {m}+{n} exceed the 16-bit packed score range")]
    PackedRangeOverflow { m: usize, n: usize },

    #[error("total length {total} exceeds the explicit traceback threshold {threshold}")]
    UseHirschberg { total: usize, threshold: usize },

    #[error("local alignment score is 0; the optimal alignment is empty")]
    EmptyAlignment,

    #[error("alignment operations are inconsistent with the sequences: {0}")]
    InvalidOps(String),

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid simulation parameters: {0}")]
    InvalidSimSpec(String),

    #[error("batch has no pairs")]
    EmptyBatch,

    #[error("pair index {index} out of range")]
    PairOutOfRange { index: usize },

    #[error("pair #{index} failed: {source}")]
    PairFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
