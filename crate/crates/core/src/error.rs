use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime modulus at most 2^31")]
    NotPrime(u64),
    #[error("residue {value} is out of range for GF({p})")]
    ResidueOutOfRange { value: u64, p: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch: GF({expected}) vs GF({found})")]
    PrimeMismatch { expected: u32, found: u32 },
    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: String, right: String },
    #[error("enumeration of {size} elements exceeds cap {cap}")]
    EnumerationTooLarge { size: u128, cap: u128 },
    #[error("search over {size} states exceeds cap {cap}")]
    SearchTooLarge { size: u128, cap: u128 },
    #[error("{count} components exceed the subset cap {cap}")]
    TooManyComponents { count: usize, cap: usize },
    #[error("operation chain is empty")]
    EmptyChain,
    #[error("operation policies differ: {left} vs {right}")]
    PolicyMismatch { left: String, right: String },
    #[error("a multi-vector space needs at least one component")]
    NoComponents,
    #[error("removal order is not a permutation of 0..{0}")]
    InvalidPermutation(usize),
}

impl Error {
    /// True for the errors raised when a configured size limit is hit.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            Error::EnumerationTooLarge { .. }
                | Error::SearchTooLarge { .. }
                | Error::TooManyComponents { .. }
        )
    }
}
