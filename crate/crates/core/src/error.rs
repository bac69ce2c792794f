use thiserror::Error;

use crate::proof::NodeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("node budget of {budget} exceeded")]
    NodeBudget {
        budget: usize,
        partial: Box<crate::proof::ProofTree>,
    },
    #[error("strategy failure at node {node}: {message}")]
    Strategy { node: NodeId, message: String },
    #[error("instance invalid: {0}")]
    InstanceInvalid(String),
    #[error("proof rejected at node {node:?}: {message}")]
    ProofRejected {
        node: Option<NodeId>,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
