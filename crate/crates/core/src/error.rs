use thiserror::Error;

use crate::graph::{Edge, Vertex};

/// Errors raised by graph construction and the decomposition routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(Vertex),
    #[error("edge {0} has an endpoint that is not a vertex")]
    UnknownEndpoint(Edge),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {0} belongs to the spanning forest")]
    EdgeInForest(Edge),
    #[error("vertices {0} and {1} lie in different components")]
    CrossComponent(Vertex, Vertex),
    #[error("graph is not planar")]
    NotPlanar,
    #[error("not a partition of the vertex set: {0}")]
    NotAPartition(String),
    #[error("graph is not 3-connected")]
    NotThreeConnected,
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("edges {0} and {1} share no vertex")]
    NoCommonVertex(Edge, Edge),
    #[error("anchor {0} and co-anchor {1} are not face-adjacent at the vertex")]
    NotFaceAdjacentAnchors(Edge, Edge),
    #[error("the outer face is not allowed here")]
    OuterFaceForbidden,
    #[error("instance too large for exhaustive enumeration: {0}")]
    TooLarge(String),
    #[error("spanning forest has no root")]
    NotRooted,
    #[error("unknown bag {0}")]
    UnknownBag(usize),
    #[error("root {0} does not lie on the cycle")]
    RootNotOnCycle(Vertex),
    #[error("input is not a simple cycle")]
    NotACycle,
    #[error("cannot orient cut {0:?}: prefix tests do not single out one side")]
    AmbiguousOrientation(Vec<Vertex>),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("face {0} does not exist")]
    UnknownFace(usize),
    #[error("not a spanning forest: {0}")]
    NotAForest(String),
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("sort error at variable {0}")]
    SortError(String),
    #[error("evaluation budget of {0} steps exceeded")]
    BudgetExceeded(u64),
    #[error("variable {0} has no value")]
    UnboundVariable(String),
    #[error("unknown library predicate {0}")]
    UnknownPredicate(String),
    #[error("bad constants: {0}")]
    BadConstants(String),
    #[error("virtual pair at a single vertex {0}")]
    SelfPair(Vertex),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported schema version {0}")]
    Schema(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
