use thiserror::Error;

/// Errors shared by every module in the crate.
///
/// `SizeBound` and `WorkBound` mark inputs that are structurally fine but too
/// large for an exact routine; callers (notably the CLI) treat them
/// differently from plain invalid input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {node} out of range for graph on {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("loop edge ({0},{0}) rejected: loops are not allowed in this graph")]
    LoopRejected(usize),

    #[error("label counts must match: left has k={left}, right has k={right}")]
    LabelMismatch { left: usize, right: usize },

    #[error("invalid labeling: {0}")]
    BadLabeling(String),

    #[error("{what} exceeds the size bound for this operation: {got} > {limit}")]
    SizeBound {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("work bound exceeded: estimated {estimate} elementary steps > {limit}")]
    WorkBound { estimate: u128, limit: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid partition: {0}")]
    BadPartition(String),

    #[error("graph is not simple: {0}")]
    NotSimple(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
