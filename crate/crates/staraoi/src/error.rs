//! Crate-wide error type and exit-code mapping for the CLI.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("row {row}: expected {expected} fields, found {found}")]
    Arity {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: cannot parse {value:?} as a number")]
    NumericParse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("unknown attribute {name:?}")]
    UnknownAttribute { name: String },

    #[error("duplicate attribute {name:?} in schema")]
    DuplicateAttribute { name: String },

    #[error("attribute {attribute}: value {value:?} is not covered by its concept tree")]
    Unmappable { attribute: String, value: String },

    #[error("attribute {attribute}: {value} falls outside every declared range")]
    OutOfDomain { attribute: String, value: f64 },

    #[error("concept {concept:?} not found in the {attribute} tree at the expected level")]
    UnknownConcept { attribute: String, concept: String },

    #[error("no tuple matches the target class {attribute} = {concept}")]
    EmptyTargetClass { attribute: String, concept: String },

    #[error("attribute {attribute}: level {level} is out of range (tree depth {depth})")]
    LevelOutOfRange {
        attribute: String,
        level: usize,
        depth: usize,
    },

    #[error("attribute {attribute} is already fully generalized")]
    FullyGeneralized { attribute: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 0 ok, 2 parse/config errors,
    /// 3 unmappable data, 4 empty target class, 1 everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse { .. }
            | Error::Arity { .. }
            | Error::NumericParse { .. }
            | Error::UnknownAttribute { .. }
            | Error::DuplicateAttribute { .. }
            | Error::UnknownConcept { .. }
            | Error::LevelOutOfRange { .. }
            | Error::FullyGeneralized { .. }
            | Error::Config(_) => 2,
            Error::Unmappable { .. } | Error::OutOfDomain { .. } => 3,
            Error::EmptyTargetClass { .. } => 4,
            Error::Io(_) => 1,
        }
    }
}
