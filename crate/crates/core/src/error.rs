use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected: node {0} is unreachable from node 0")]
    Disconnected(usize),

    #[error("node {node} out of range (graph has {count} nodes)")]
    NodeOutOfRange { node: usize, count: usize },

    #[error("edge {0} is not a tree edge")]
    NotATreeEdge(usize),

    #[error("edge {0} is already cut")]
    AlreadyCut(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("empty range")]
    EmptyRange,

    #[error("non-finite utility for edge {0}")]
    NonFiniteUtility(usize),

    #[error("weight {weight} on edge {edge} is outside (0, 1]")]
    WeightOutOfRange { edge: usize, weight: f64 },

    #[error("missing weights on spanning tree")]
    MissingWeights,

    #[error("{what} has {count} nodes, above the enumeration cap of {cap}; use check_sufficient_homogeneity instead")]
    TooLarge { what: &'static str, count: usize, cap: usize },

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("clamp rate {rate:.3} is at or above 50%; weight-release parameters are unsuitable")]
    ExcessiveClamping { rate: f64 },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
