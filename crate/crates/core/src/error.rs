use thiserror::Error;

use crate::quat::Quat;

/// Why a quaternion failed to represent an element of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipFailure {
    /// The primitive norm is not of the form p^r l^s.
    BadNorm,
    /// The norm is fine but the mod-4 parity pattern is wrong.
    BadParity,
}

impl std::fmt::Display for MembershipFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MembershipFailure::BadNorm => f.write_str("norm is not of the form p^r l^s"),
            MembershipFailure::BadParity => f.write_str("parity condition fails"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero quaternion")]
    ZeroQuaternion,

    #[error("central element has no direction")]
    CentralElement,

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("invalid lattice parameters: {0}")]
    InvalidParams(String),

    #[error("not in Γ: {quat} ({reason})")]
    NotInGamma {
        quat: Box<Quat>,
        reason: MembershipFailure,
    },

    #[error("elements belong to different lattices ({0:?} vs {1:?})")]
    MixedParams((u64, u64), (u64, u64)),

    #[error("generator letter {0} out of range")]
    LetterOutOfRange(String),

    #[error("operation undefined for the identity element")]
    IdentityElement,

    #[error("wrong norm: expected {expected}, got {actual}")]
    WrongNorm { expected: String, actual: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("not a periodic apartment pair: {0}")]
    NotPeriodicPair(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("golden file mismatch: {0}")]
    Golden(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
