use thiserror::Error;

use crate::graph::Edge;

/// Errors raised by graph construction, contraction and the spectral routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} is outside [1, {n}]")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("removing the requested vertices leaves an empty graph")]
    EmptyResult,
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("graph is not connected")]
    Disconnected,
    #[error("ground sets differ: {0} vs {1}")]
    MismatchedGroundSet(usize, usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("{what} = {value} exceeds the supported limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("argument out of range: {0}")]
    BadArgument(String),
    #[error("spanning tree does not span the graph: {0}")]
    NotSpanning(String),
    #[error("matrix is not symmetric or has non-finite entries")]
    InvalidMatrix,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Rayleigh quotient of the zero vector")]
    ZeroVector,
    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("reduced order {reduced} must be smaller than full order {full}")]
    OrderMismatch { reduced: usize, full: usize },
    #[error("target order {r} is invalid for a graph of order {n}")]
    BadOrder { r: usize, n: usize },
    #[error("symmetric elimination broke down at shift {0}")]
    PivotBreakdown(f64),
    #[error("reduction result is inconsistent with the input graph: {0}")]
    InconsistentResult(String),
    #[error("cannot add {requested} edges; only {available} non-edges exist")]
    TooManyEdges { requested: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
