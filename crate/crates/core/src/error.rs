use thiserror::Error;

/// Errors raised by group construction, zero-sum searches and the
/// elasticity engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("element {element} is not in the group with invariant factors {factors:?}")]
    NotInGroup { element: String, factors: Vec<u64> },

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("group of order {order} exceeds the exhaustive-search limit of {limit} (raise --max-group-order to override)")]
    SizeGuard { order: u64, limit: u64 },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
