//! Crate-wide error type.

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field spec: {0}")]
    InvalidFieldSpec(String),
    #[error("polynomial is reducible over the rationals")]
    ReduciblePolynomial,
    #[error("unsupported field: power basis is not maximal at prime {0}")]
    NotMonogenic(BigInt),
    #[error("zero input where a nonzero element is required")]
    ZeroInput,
    #[error("cannot parse element: {0}")]
    ElementParse(String),
    #[error("malformed query: {0}")]
    MalformedQuery(String),
    #[error("search exhausted at bound {bound}: {what}")]
    SearchExhausted { what: String, bound: u64 },
    #[error("unsatisfiable symbol prescription: condition ({0}) violated")]
    Unsatisfiable(char),
    #[error("precision escalation limit reached in {0}")]
    EscalationLimit(String),
    #[error("formula pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("{0} is a square in the field, expected a nonsquare")]
    ExpectedNonsquare(String),
    #[error("unknown formula template: {0}")]
    UnknownTemplate(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code: 2 for search exhaustion, 1 for every other domain error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SearchExhausted { .. } => 2,
            _ => 1,
        }
    }
}
