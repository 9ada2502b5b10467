use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("p = {p} exceeds the configured maximum {max}")]
    PrimeTooLarge { p: u32, max: u32 },

    #[error("operands belong to different rings (p = {left} vs p = {right})")]
    ContextMismatch { left: u32, right: u32 },

    #[error("permutation degrees differ ({left} vs {right})")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPerm(String),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("empty generating set")]
    EmptyGenSet,

    #[error("k = {k} outside the range [{p}, {}] for p = {p}", 2 * (p - 1))]
    KOutOfRange { p: u32, k: u32 },

    #[error("pair (g, h) violates the compatibility condition")]
    Incompatible,

    #[error("group closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },

    #[error("enumeration needs p^{exp} items, over the cap of {cap}")]
    EnumerationCapExceeded { exp: u32, cap: u64 },

    #[error("oracle refused: {0}")]
    OracleOutOfScale(String),

    #[error("cannot parse ring element digits: {0}")]
    InvalidDigits(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for the errors that mean "valid request, but beyond desk scale".
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::ClosureCapExceeded { .. }
                | Error::EnumerationCapExceeded { .. }
                | Error::OracleOutOfScale(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
