use thiserror::Error;

use crate::ncst::Edge;

/// Errors raised by validation, structural operations and the analysis layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("prefix height becomes negative ({height}) after step {position}")]
    RejectNegativePrefix { position: usize, height: i64 },
    #[error("path ends at height {height} instead of 0")]
    RejectNonzeroTotal { height: i64 },
    #[error("path length {len} is not a multiple of 3")]
    RejectLength { len: usize },
    #[error("unexpected character {ch:?} at position {position}")]
    BadCharacter { ch: char, position: usize },
    #[error("operation requires a non-empty path")]
    EmptyPath,
    #[error("operation requires a tree with at least one edge")]
    EmptyTree,
    #[error("size {n} exceeds the configured cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("edge list is not a spanning tree: {0}")]
    NotSpanning(String),
    #[error("edges {0} and {1} cross")]
    Crossing(Edge, Edge),
    #[error("edge {0} is not in the tree")]
    EdgeNotInTree(Edge),
    #[error("malformed edge text {0:?}")]
    BadEdge(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("trees do not differ by exactly one flip")]
    NotAdjacent,
    #[error("first path does not dominate the second")]
    DominanceViolated,
    #[error("paths are not related by a single adjacent move")]
    NotAdjacentMove,
    #[error("shift precondition violated under edge {0}")]
    ShiftPreconditionViolated(Edge),
    #[error("step index {index} out of range for a path of {len} steps")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("no adjacent-move pair routes through this transition with the given encoding")]
    NoPreimage,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
