use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(usize),
    #[error("node index {index} out of range for graph with {n} nodes")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("empty graph: operation needs at least one edge")]
    EmptyGraph,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient non-edges: requested {requested}, only {available} available (short by {})", requested - available)]
    InsufficientNonEdges { requested: usize, available: usize },
    #[error("scoreless method: {0} has no similarity score")]
    ScorelessMethod(&'static str),
    #[error("pair ({0}, {0}) is not a valid node pair")]
    DegeneratePair(usize),
    #[error("modularity undefined on a graph without edges")]
    ModularityUndefined,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("non-binary label {0}")]
    NonBinary(u8),
    #[error("AUC undefined: both classes must be present")]
    AucUndefined,
    #[error("backward needs a scalar root, got shape {0:?}")]
    NonScalarRoot((usize, usize)),
    #[error("empty attribute table")]
    EmptyTable,
}
