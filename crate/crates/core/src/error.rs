use thiserror::Error;

/// Errors produced by ingestion, validation and the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: edge weight must be positive, got {weight}")]
    InvalidWeight { line: usize, weight: f64 },

    #[error("node index {index} out of range for graph with {node_count} nodes")]
    InvalidNode { index: usize, node_count: usize },

    #[error("line {line}: unknown node id {id:?}")]
    UnknownNode { line: usize, id: String },

    #[error("partition is missing {} node(s): {}", .0.len(), .0.join(", "))]
    MissingNodes(Vec<String>),

    #[error("partition covers {partition} nodes but graph has {graph}")]
    PartitionSize { partition: usize, graph: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("generation failed: {0}")]
    Infeasible(String),

    #[error("network has no rewired nodes")]
    NoRewiredNodes,

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
