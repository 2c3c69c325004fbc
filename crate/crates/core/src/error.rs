use thiserror::Error;

use crate::graph::{EdgeId, Vertex, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: Vertex, order: usize },

    #[error("loop at vertex {0}")]
    Loop(Vertex),

    #[error("edge {0} does not exist")]
    InvalidEdge(EdgeId),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid input graph: {0}")]
    InvalidGraph(Violation),

    #[error("not a perfect matching: {0}")]
    NotPerfectMatching(String),

    #[error("enumeration limit must be positive")]
    InvalidLimit,

    #[error("edges {first} and {second} share a vertex and colour {colour}")]
    ImproperColouring {
        first: EdgeId,
        second: EdgeId,
        colour: u8,
    },

    #[error("invalid colouring: {0}")]
    InvalidColouring(String),

    #[error("unsupported palette size {0}")]
    UnsupportedPalette(u8),

    #[error("no proper {0}-edge-colouring exists")]
    NoColouring(u8),

    #[error("colouring is not normal: edge {0} is medium")]
    NotNormal(EdgeId),

    #[error("not a Petersen colouring: {0}")]
    NotPetersenColouring(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An internal consistency check failed. This indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("{medium} medium edges on {order} vertices violates the 4n/5 bound{}", if *.strict { " (strict for graphs other than Petersen)" } else { "" })]
    BoundViolation {
        medium: usize,
        order: usize,
        strict: bool,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
