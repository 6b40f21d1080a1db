use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid element index {index} for a group of order {order}")]
    InvalidElement { index: usize, order: usize },

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("matrix shape error: {0}")]
    Shape(String),

    #[error("invalid representation: {0}")]
    InvalidRep(String),

    #[error("singular basis matrix")]
    SingularBasis,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("invalid orbit override: {0}")]
    InvalidOverride(String),

    #[error("inconsistent construction data: {0}")]
    Inconsistent(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed file {path}: {message}")]
    Format { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
