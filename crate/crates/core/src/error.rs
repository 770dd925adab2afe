use std::io;

use thiserror::Error;

/// Errors produced by parameter validation, coding and shard I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("tau must be positive (got {0})")]
    NonPositiveTau(i64),
    #[error("k must be at least 2 (got {0})")]
    KTooSmall(i64),
    #[error("p must be an odd integer >= 3 (got {0})")]
    PNotOdd(i64),
    #[error("p = {p} has divisor {divisor} <= k - 1 = {k_minus_one}")]
    DivisorConditionViolated {
        p: i64,
        divisor: i64,
        k_minus_one: i64,
    },
    #[error("common-bit rows {n_c} exceed array height {rows}")]
    CommonRowsExceedArray { n_c: usize, rows: usize },

    #[error("cell ({row}, {col}) is outside the row ring")]
    IndexOutOfRing { row: usize, col: usize },
    #[error("lane width must be at least 1 byte")]
    ZeroLaneWidth,
    #[error("lane width mismatch: expected {expected} bytes, got {got}")]
    LaneWidthMismatch { expected: usize, got: usize },
    #[error("column {0} is a parity column and cannot be updated directly")]
    ParityColumnNotUpdatable(usize),

    #[error("{0} erased columns, at most 2 are recoverable")]
    TooManyErasures(usize),
    #[error("column {col} out of range for {columns} columns")]
    ColumnOutOfRange { col: usize, columns: usize },
    #[error("erasure pattern is empty or lists a column twice")]
    InvalidPattern,
    #[error("row parity column is required but erased")]
    RowParityMissing,
    #[error("diagonal parity column is required but erased")]
    DiagParityMissing,
    #[error("both parity columns are required")]
    ParityMissing,
    #[error("decoding chain stalled: {0}")]
    ChainStall(String),

    #[error("linear system is rank deficient ({rank} < {unknowns})")]
    Underdetermined { rank: usize, unknowns: usize },

    #[error("p = {0} is not prime")]
    PNotPrime(i64),
    #[error("p = {p} must be at least k = {k}")]
    PTooSmall { p: i64, k: i64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{0} shards missing, at most 2 can be rebuilt")]
    TooManyMissing(usize),
    #[error("shard header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("shard {0} failed its header checksum")]
    CrcFailure(usize),
    #[error("malformed shard: {0}")]
    MalformedShard(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
