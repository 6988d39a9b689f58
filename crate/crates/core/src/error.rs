use thiserror::Error;

/// Errors produced while building or reading graphs, covers and instances.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("{0}-{1} is not an edge of the base graph")]
    NotAnEdge(usize, usize),

    #[error("fiber index {index} out of range 1..={kappa}")]
    FiberIndexOutOfRange { index: usize, kappa: usize },

    #[error("pairs on edge {u}-{v} do not form a matching")]
    NotAMatching { u: usize, v: usize },

    #[error("fiber size must be at least 1")]
    ZeroKappa,

    #[error("value map shape does not match cover ({expected} entries expected, got {got})")]
    ValueShape { expected: usize, got: usize },

    #[error("transversal has {got} picks, expected {expected}")]
    TransversalShape { expected: usize, got: usize },

    #[error("base graph is disconnected")]
    Disconnected,

    #[error("graph has {n} vertices, brute force is limited to {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("precondition not met: {0}")]
    Precondition(String),

    #[error("instance space too large ({count} > {limit}); use a sampled policy")]
    EnumerationGuard { count: u128, limit: u128 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid JSON instance: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
