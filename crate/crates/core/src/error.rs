use thiserror::Error;

/// Errors raised by planning, solving and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Range(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("{n} qubits exceeds the dense-matrix cap of {cap}")]
    Capacity { n: usize, cap: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("infeasible: no setting covers {}", .uncovered.join(", "))]
    Infeasible { uncovered: Vec<String> },

    #[error("no measurement records for plan settings {settings:?}")]
    MissingRecords { settings: Vec<usize> },

    #[error("reconstruction incomplete: missing mu indices {missing:?}")]
    Reconstruction { missing: Vec<usize> },

    #[error("singular input: {0}")]
    Singular(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: msg.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::parse(e.line(), e.column(), e.to_string())
    }
}
