use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { line: usize, vertex: u64, n: usize },
    #[error("line {line}: expected {expected} vertices, found {found}")]
    WrongArity {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
    #[error("line {line}: edge vertices must be strictly increasing")]
    UnsortedEdge { line: usize },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph on {n} vertices exceeds the canonical-form limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("node budget of {0} exhausted; result unknown")]
    BudgetExceeded(u64),
    #[error("edge set is not connected")]
    NotConnected,
    #[error("diamond is not contained in the edge set")]
    DiamondNotInF,
    #[error("partition is not the 1-cluster partition of the graph")]
    NotM1Input,
    #[error("part {0} is not in the final partition")]
    UnknownPart(usize),
    #[error("part has {found} one-clusters, above the search cap of {cap}")]
    TooManyClusters { found: usize, cap: usize },
    #[error("certification requires an even k >= 4 (got k = {0})")]
    OddK(usize),
    #[error("certification requires k >= 4 (got k = {0})")]
    KTooSmall(usize),
    #[error("certificate does not match the graph: {0}")]
    CertMismatch(String),
    #[error("graph is not G_k-free: {0}")]
    NotFree(String),
    #[error("structural check failed in trusted mode: {0}")]
    StructureViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
