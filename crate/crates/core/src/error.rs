use thiserror::Error;

/// Errors raised by digraph construction and the structural operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("order {order} is outside 1..=64")]
    Order { order: usize },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("vertex {vertex} is blown up twice")]
    DuplicateTarget { vertex: usize },
    #[error("order {order} exceeds the limit {limit} for {operation}")]
    OrderLimit {
        order: usize,
        limit: usize,
        operation: &'static str,
    },
    #[error("{0}")]
    Parameter(String),
}

/// A malformed serialized digraph. Line and column are 1-based; column 0
/// means the whole line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
