use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    BadDegree {
        vertex: VertexId,
        degree: usize,
        expected: &'static str,
    },
    #[error("graph has no 3-valent vertex")]
    NoBranchVertex,
    #[error("graph is not connected")]
    Disconnected,
    #[error("frame is not spanning: vertex {0} has no frame edge")]
    NotSpanning(VertexId),
    #[error("frame component containing vertex {vertex} has {order} vertices (odd)")]
    OddComponent { vertex: VertexId, order: usize },
    #[error("frame component containing vertex {0} is neither a cycle nor a Kotzig subdivision")]
    BadComponent(VertexId),
    #[error("coloring is not perfect for this frame: {0}")]
    NotPerfect(String),
    #[error("row graph is malformed: {0}")]
    MalformedRowGraph(String),
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("column contraction contains a cycle")]
    NotAForest,
    #[error("t-join infeasible: component containing vertex {0} has an odd number of terminals")]
    OddTerminals(VertexId),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("witness invalid: {0}")]
    InvalidWitness(String),
    #[error("coloring is not amiable: {0}")]
    NotAmiable(String),
    #[error("parity-coloring invalid: {0}")]
    InvalidParityColoring(String),
    #[error("column contraction is not eulerian")]
    NotEulerian,
    #[error("instance exceeds oracle limit: {0}")]
    OracleLimit(String),
    #[error("construction invariant violated at {stage}: {detail}")]
    ConstructionInvariant { stage: &'static str, detail: String },
    #[error("two-cycle cover input invalid: {0}")]
    CoverInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
