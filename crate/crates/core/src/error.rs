use thiserror::Error;

use crate::graph::Edge;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("line {line}: {message}")]
    VertexFile { line: usize, message: String },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("edge {0} is not a 1-edge")]
    NotOneEdge(Edge),

    #[error("point has no 1-edges")]
    NoOneEdges,

    #[error("{what} too large: {got} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("graph is disconnected: node {0} is unreachable from node 0")]
    Disconnected(usize),

    #[error("costs are not metric on the input graph: edge {0}")]
    NotMetric(Edge),

    #[error("walk class mismatch: expected multiplicity {expected}, walk has {found}")]
    ClassMismatch { expected: u8, found: u8 },

    #[error("linear program is infeasible")]
    Infeasible { farkas: Vec<String> },

    #[error("linear program is unbounded")]
    Unbounded { ray: Vec<String> },

    #[error("solver certificate failed: {0}")]
    Certification(String),

    #[error("row generation stalled: walk row already present")]
    RowGenerationStalled,

    #[error("C* = C({edge}) = {value} is below 1")]
    ConstantBelowOne { edge: Edge, value: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
