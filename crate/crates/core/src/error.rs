use std::fmt;

use crate::structure::StructureReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single problem found while validating a journal set against its
/// citation matrix. Validation collects every issue rather than stopping at
/// the first one.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    /// The matrix is not `journals x journals`, or a row has the wrong length.
    DimensionMismatch {
        what: String,
        expected: usize,
        found: usize,
    },
    NegativeCount {
        row: usize,
        col: usize,
        value: f64,
    },
    NonFiniteCount {
        row: usize,
        col: usize,
    },
    DuplicateId {
        id: String,
        first: usize,
        second: usize,
    },
    EmptyId {
        index: usize,
    },
    /// Article counts must be finite and non-negative.
    InvalidArticles {
        journal: String,
        period: u8,
        value: f64,
    },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::DimensionMismatch {
                what,
                expected,
                found,
            } => write!(
                f,
                "dimension mismatch in {what}: expected {expected}, found {found}"
            ),
            ValidationIssue::NegativeCount { row, col, value } => {
                write!(f, "negative citation count {value} at ({row}, {col})")
            }
            ValidationIssue::NonFiniteCount { row, col } => {
                write!(f, "non-finite citation count at ({row}, {col})")
            }
            ValidationIssue::DuplicateId { id, first, second } => {
                write!(
                    f,
                    "duplicate journal id {id:?} at positions {first} and {second}"
                )
            }
            ValidationIssue::EmptyId { index } => write!(f, "empty journal id at position {index}"),
            ValidationIssue::InvalidArticles {
                journal,
                period,
                value,
            } => write!(
                f,
                "invalid article count {value} for journal {journal:?} in period {period}"
            ),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid dataset: {}", join_issues(.0))]
    Invalid(Vec<ValidationIssue>),

    #[error("journal index {index} out of range for {n} journals")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("journal {journal:?} published no articles in the first period")]
    ZeroArticles { journal: String },

    #[error("journal {journal:?} published no articles in the second period")]
    ZeroArticlesT2 { journal: String },

    #[error("journal {journal:?} gives no citations (zero row sum)")]
    ZeroOutgoing { journal: String },

    #[error("citation graph is not irreducible ({} strongly connected components)", .0.components.len())]
    NotIrreducible(Box<StructureReport>),

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("instance generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("singular linear system")]
    Singular,
}

impl Error {
    /// Stable machine-readable name of the error variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Invalid(_) => "Invalid",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::ZeroArticles { .. } => "ZeroArticles",
            Error::ZeroArticlesT2 { .. } => "ZeroArticlesT2",
            Error::ZeroOutgoing { .. } => "ZeroOutgoing",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::InvalidParams(_) => "InvalidParams",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::Parse { .. } => "Parse",
            Error::GenerationFailed { .. } => "GenerationFailed",
            Error::Singular => "Singular",
        }
    }
}

fn join_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
