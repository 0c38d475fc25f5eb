use thiserror::Error;

use crate::field::FieldSpec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("{op}: incompatible shapes {lhs:?} and {rhs:?}")]
    ShapeMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("{op}: incompatible arities {lhs:?} and {rhs:?}")]
    ArityMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
    #[error("enumeration over {field} with {dim} coordinates exceeds the supported bound")]
    EnumerationTooLarge { field: FieldSpec, dim: usize },
    #[error("operation requires a finite field, got {0}")]
    NotFinite(FieldSpec),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    /// A proved identity failed to hold: always an implementation bug.
    #[error("theorem violated: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_owned(),
            reason: reason.into(),
        }
    }
}
