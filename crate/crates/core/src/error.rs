use thiserror::Error;

use crate::rootdata::Family;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid type {family}{rank}: {family} requires rank >= {min_rank}")]
    InvalidType {
        family: Family,
        rank: usize,
        min_rank: usize,
    },

    #[error("level M must be at least 1, got {0}")]
    InvalidLevel(i64),

    #[error("simple root index {index} out of range 1..={rank}")]
    InvalidRootIndex { index: usize, rank: usize },

    #[error("group of order {required} exceeds the size cap {cap}; raise the cap to at least {required}")]
    SizeLimit { required: u64, cap: u64 },

    #[error("table of {cells} cells exceeds the memory cap of {cap} cells")]
    MemoryCap { cells: u64, cap: u64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("grid mismatch: expected {expected}, found {found}")]
    GridMismatch { expected: String, found: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
