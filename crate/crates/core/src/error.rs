use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(String, String),
    #[error("invalid vertex label {0:?}: labels are non-empty and whitespace-free")]
    InvalidLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("{what} must be at least {min}, got {got}")]
    OutOfRange {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("butterfly dimension {0} is too large")]
    TooLarge(usize),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}
