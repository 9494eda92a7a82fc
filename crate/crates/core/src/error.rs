use std::fmt;

use crate::report::VerificationReport;

/// Errors raised by constructors and by operations whose preconditions fail.
///
/// Identity violations are never errors; they are reported through
/// [`VerificationReport`] entries.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("label index {index} out of range for {m} labels")]
    LabelOutOfRange { index: usize, m: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("tolerance out of range: {0}")]
    Tolerance(String),

    #[error("near-zero denominator: {0}")]
    NearZero(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("missing F entry F({0:?})")]
    MissingF([usize; 6]),

    #[error("missing R entry R({0:?})")]
    MissingR([usize; 3]),

    #[error("{0} entry on a non-admissible index tuple {1:?}")]
    NotAdmissible(&'static str, Vec<usize>),

    #[error("fusion multiplicity N{0:?} = {1} exceeds 1; only multiplicity-free data is supported")]
    NotMultiplicityFree([usize; 3], u32),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid modular parameter: {0}")]
    Tau(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("validation failed:\n{0}")]
    Validation(VerificationReport),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Syntax or domain error in a number expression, with the byte offset where
/// it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.pos + 1, self.msg)
    }
}

impl std::error::Error for ExprError {}

/// Error in an `mtc-data v1` file, tagged with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ParseError {}
