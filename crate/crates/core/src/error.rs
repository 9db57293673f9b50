use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("modulus {q} exceeds the supported limit {limit}")]
    ModulusTooLarge { q: u32, limit: u32 },

    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("value {value} is not an element of GF({q})")]
    NotInField { value: u64, q: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    /// A malformed argument, e.g. sequences of the wrong length.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The operation is undefined for this input (truncating a 1x1 matrix, dropping from an empty vector).
    #[error("domain error: {0}")]
    Domain(String),

    /// A predicate was called on a configuration that does not meet its hypotheses.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("nullity string violates the grammar at position {position}: {reason}")]
    InvalidString { position: usize, reason: String },

    #[error("enumeration needs {required} matrices but the budget is {budget}")]
    BudgetExceeded { required: BigUint, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
