use alloc::string::String;
use thiserror::Error;

/// Everything that can go wrong in the core crate.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("vector must have unit norm (got norm {0})")]
    NotUnit(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not Hermitian (max deviation {0})")]
    NotHermitian(String),
    #[error("state does not have a positive partial transpose")]
    NotPpt,
    #[error("subpair {0} is not certified witness-free")]
    Uncertified(String),
    #[error("closed-form family member {0} fails the exceptional relation")]
    FamilyCheck(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn shape_error(expected: (usize, usize), got: (usize, usize)) -> Error {
    Error::Dimension {
        expected: alloc::format!("{}x{}", expected.0, expected.1),
        got: alloc::format!("{}x{}", got.0, got.1),
    }
}
