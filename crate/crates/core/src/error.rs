use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the lab.
#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    Index { index: usize, n_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("degenerate vector: {0}")]
    DegenerateVector(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid rotation constant: {0}")]
    InvalidRotation(String),

    #[error("invalid HHL configuration: {0}")]
    Configuration(String),

    #[error("post-selection starved: success probability {0:.3e}")]
    StarvedPostSelection(f64),

    #[error("{path}:{line}: {message}")]
    DataParse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: schema error: {message}")]
    Schema { path: PathBuf, message: String },

    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    #[error("invalid experiment config: field `{field}`: {message}")]
    Config {
        field: &'static str,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("report encoding: {0}")]
    Report(String),
}

/// Coarse classification used by the CLI to choose an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config { .. } => ErrorClass::Config,
            Error::DataParse { .. }
            | Error::Schema { .. }
            | Error::Io { .. }
            | Error::DegenerateSplit(_)
            | Error::Report(_) => ErrorClass::Data,
            Error::Singular(_)
            | Error::StarvedPostSelection(_)
            | Error::InvalidRotation(_)
            | Error::Configuration(_) => ErrorClass::Numerical,
            // Remaining variants come from malformed inputs reaching the numerical core.
            _ => ErrorClass::Numerical,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
