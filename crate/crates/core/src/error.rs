use thiserror::Error;

use crate::graph::VertexId;

/// Construction, query and parse failures on a single digraph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("half-order a must be at least 1")]
    ZeroHalfOrder,
    #[error("half-order a = {0} exceeds the supported maximum of 64")]
    HalfOrderTooLarge(usize),
    #[error("arc {tail} -> {head} joins two vertices of the same partite set")]
    SameSide { tail: VertexId, head: VertexId },
    #[error("vertex {vertex} out of range for a = {a}")]
    OutOfRange { vertex: VertexId, a: usize },
    #[error("vertex set mixes both partite sets")]
    MixedSides,
    #[error("order {0} is below 3")]
    OrderTooSmall(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Failures of the exact cycle and matching searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("cap exceeded: order {order} is above the exact-search limit of {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("cap exceeded: brute force supports a <= {max}, got a = {a}")]
    BruteForceCap { a: usize, max: usize },
    #[error("cycle length {0} is odd; bipartite digraphs have no odd cycles")]
    OddLength(usize),
    #[error("cycle length {length} outside 2..={order}")]
    LengthOutOfRange { length: usize, order: usize },
    #[error("host is not a cycle of this digraph")]
    InvalidHost,
    #[error("host cycle covers every vertex, so no bypass can exist")]
    HostCoversAllVertices,
    #[error("digraphs have different half-orders ({0} vs {1})")]
    HalfOrderMismatch(usize, usize),
}

/// Out-of-range experiment or generator parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("k = {k} outside 2..={max} for a = {a}")]
    KOutOfRange { a: usize, k: usize, max: usize },
    #[error("a = {a} unsupported here (needs {expected})")]
    UnsupportedHalfOrder { a: usize, expected: &'static str },
    #[error("arc probability {0} outside [0, 1]")]
    ArcProbability(f64),
    #[error("max_attempts must be at least 1")]
    ZeroAttempts,
    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
