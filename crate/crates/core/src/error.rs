use thiserror::Error;

/// Errors produced by group, charge-system and simulation operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("unsupported group '{0}': no stored irreducible representations")]
    UnsupportedGroup(String),

    #[error("inconsistent irreps: {0}")]
    InconsistentIrreps(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid charge system: {0}")]
    InvalidChargeSystem(String),

    #[error("fusion truncated: {0}")]
    Truncated(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("map is not contracting: {0}")]
    NotContracting(String),

    #[error("state is not invariant: {0}")]
    NotInvariant(String),

    #[error("total charge must be reduced to trivial first: {0}")]
    MustReduceFirst(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
