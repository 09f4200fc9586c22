use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library.
///
/// Variants split into two families: precondition failures (bad input,
/// unsupported instance, exhausted budget) and consistency violations, which
/// signal that a proven identity failed on computed data. The CLI maps the
/// first family to exit code 2 and the second to exit code 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("zero where a positive integer is required: {0}")]
    Zero(&'static str),
    #[error("{a} does not divide {b}")]
    NotDivisible { a: u64, b: u64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid invariant: {0}")]
    Invariant(String),
    #[error("invalid group: {0}")]
    Group(String),
    #[error("element or coset index out of range: {0}")]
    OutOfRange(String),
    #[error("invalid field: {0}")]
    Field(String),
    #[error("invalid Brauer class: {0}")]
    Class(String),
    #[error("base field mismatch: {0}")]
    BaseMismatch(String),
    #[error("field containment fails: {0}")]
    NotContained(String),
    #[error("cyclic algebra: {0}")]
    Cyclic(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("enumeration budget exceeded: {needed} terms, budget {budget}")]
    Budget { needed: String, budget: u64 },
    #[error("index oracle: {0}")]
    Oracle(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("consistency violation: {0}")]
    Consistency(String),
}

impl Error {
    /// True for failures of a mathematical identity on computed values.
    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}
