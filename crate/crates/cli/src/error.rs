use std::fmt;

use tomoplan_core::Error;

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Usage(String),
    Incomplete { uncovered: Vec<String> },
    HashMismatch { file: String, expected: String },
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) => match e {
                Error::Infeasible { .. } => 2,
                Error::Io(_) => 5,
                Error::Range(_) | Error::Capacity { .. } => 6,
                Error::MissingRecords { .. } => 7,
                _ => 1,
            },
            Failure::Usage(_) => 1,
            Failure::Incomplete { .. } => 3,
            Failure::HashMismatch { .. } => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(m) => f.write_str(m),
            Failure::Incomplete { uncovered } => {
                write!(f, "incomplete: {} uncovered: {}", uncovered.len(), uncovered.join(","))
            }
            Failure::HashMismatch { file, expected } => {
                write!(f, "catalog hash mismatch: file has {file}, configured catalog is {expected}")
            }
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}
