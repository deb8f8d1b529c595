use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graphs are limited to {max} vertices, got {n}")]
    TooManyVertices { n: usize, max: usize },
    #[error("vertex sets must be disjoint")]
    OverlappingSets,
    #[error("operation requires an undirected graph")]
    DirectedInput,
    #[error("operation requires a graph without loops")]
    LoopedInput,
    #[error("the vertex set must be nonempty")]
    EmptySet,
    #[error("the reduced set does not induce an acyclic subgraph")]
    NotAcyclic,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{what} = {value} exceeds the configured cap {cap}; raise the cap to proceed")]
    CapExceeded { what: &'static str, value: u64, cap: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cache I/O error: {0}")]
    Io(String),
}
