use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },

    #[error("matrix is not unit lower triangular (entry ({row},{col}))")]
    NotUnitriangular { row: usize, col: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("sequence has {len} terms, {needed} required")]
    SequenceTooShort { needed: usize, len: usize },

    #[error("sequence must start with {r} zeros")]
    MissingLeadingZeros { r: usize },

    #[error("matrix is not unipotent modulo {p}")]
    NotUnipotent { p: u64 },

    #[error("matrix is not near-Jordan: {0}")]
    NotNearJordan(String),

    #[error("inexact division while rescaling at ({row},{col})")]
    InexactDivision { row: usize, col: usize },

    #[error("block layout does not fit: {0}")]
    BlockLayout(String),

    #[error("enumeration bound exceeded: n = {0} (max 9)")]
    EnumerationBound(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
