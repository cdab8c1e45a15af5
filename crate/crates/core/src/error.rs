use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hyperedge `{edge}`: non-positive weight {value} for {what}")]
    NonPositiveWeight {
        edge: String,
        what: String,
        value: f64,
    },
    #[error("hyperedge `{edge}` references undeclared vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("hyperedge `{edge}` lists vertex `{vertex}` more than once")]
    DuplicateMember { edge: String, vertex: String },
    #[error("vertex `{0}` declared more than once")]
    DuplicateVertex(String),
    #[error("hyperedge `{0}` declared more than once")]
    DuplicateEdge(String),
    #[error("hyperedge `{0}` has no members")]
    EmptyEdge(String),
    #[error("vertex {vertex} is not a member of hyperedge `{edge}`")]
    VertexNotInEdge { edge: String, vertex: usize },
    #[error("vertex {0} is not in the hypergraph")]
    VertexOutOfRange(usize),
    #[error("argument {x} outside the domain [0, {upper}]")]
    DomainError { x: f64, upper: f64 },
    #[error("operation not defined for splitting family {0}")]
    FamilyError(String),
    #[error("invalid splitting specification: {0}")]
    InvalidSpec(String),
    #[error("hyperedge `{edge}` too large: {size} exceeds limit {limit}")]
    EdgeTooLarge {
        edge: String,
        size: usize,
        limit: usize,
    },
    #[error("hyperedge `{edge}` too small for this gadget: {size} members")]
    EdgeTooSmall { edge: String, size: usize },
    #[error("gadget has an auxiliary group of {0} nodes, brute force limit is 20")]
    TooManyAuxiliaries(usize),
    #[error("hyperedge `{edge}`: coefficient {index} is {value} (generator not concave)")]
    NegativeCoefficient {
        edge: String,
        index: usize,
        value: f64,
    },
    #[error("hyperedge `{0}`: generator is not symmetric, use the asymmetric reduction")]
    NotSymmetric(String),
    #[error("points are not concave-consistent at index {0}")]
    NonConcavePoints(usize),
    #[error("generator has an unbounded slope at the origin")]
    InfiniteInitialSlope,
    #[error("tangent search failed: {0}")]
    NoTangentFound(String),
    #[error("malformed envelope: {0}")]
    MalformedEnvelope(String),
    #[error("source and sink are the same node {0}")]
    SameTerminal(usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("arc {tail}->{head} has invalid capacity {value}")]
    InvalidCapacity { tail: usize, head: usize, value: f64 },
    #[error("node {0} is not in the flow network")]
    NodeOutOfRange(usize),
    #[error("graph has {0} nodes, brute force limit is 22")]
    GraphTooLarge(usize),
    #[error("vertex {0} is both a source and a sink seed")]
    OverlappingSeeds(usize),
    #[error("{0} seed set is empty")]
    EmptySeeds(&'static str),
    #[error("seed constraints admit no finite cut")]
    InfeasibleSeeds,
    #[error("vocabulary is empty after filtering")]
    EmptyVocabulary,
    #[error("prediction and ground-truth key sets differ")]
    KeyMismatch,
    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("hyperedge `{edge}`: {source}")]
    InEdge {
        edge: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn in_edge(edge: &str, err: Error) -> Self {
        match err {
            already @ Error::InEdge { .. } => already,
            other => Error::InEdge {
                edge: edge.to_string(),
                source: Box::new(other),
            },
        }
    }

    /// Strips any `InEdge` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::InEdge { source, .. } => source.root(),
            other => other,
        }
    }
}
