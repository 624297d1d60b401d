use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("edge {edge} has non-positive length")]
    NonPositiveLength { edge: usize },
    #[error("vertex id {vertex} out of range (vertex count {count})")]
    BadVertexId { vertex: usize, count: usize },
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("bad point: {0}")]
    BadPoint(String),
    #[error("subdivision count must be at least 1")]
    BadM,
    #[error("parallel multiplicity must be at least 1")]
    BadN,
    #[error("bad edge id {0}")]
    BadEdgeId(usize),
    #[error("rewrite pattern not present: {0}")]
    PatternMismatch(String),
    #[error("node {0} is a terminal and cannot be eliminated")]
    TerminalElimination(usize),
    #[error("reduction could not proceed: {0}")]
    ReductionStuck(String),
    #[error("integrand is not polynomial of the declared degree on edge {edge}")]
    NonPolynomialIntegrand { edge: usize },
    #[error("the two points must be distinct")]
    SamePoint,
    #[error("graph has a bridge")]
    HasBridge,
    #[error("deleting bridge edge {0} would disconnect the graph")]
    BridgeDeletion(usize),
    #[error("graph must have total length 1")]
    NotNormalized,
    #[error("topology has no cycle left after contracting bridges")]
    NotBridgeless,
    #[error("expected {expected} graphs for immersion, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
