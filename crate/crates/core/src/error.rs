use thiserror::Error;

use crate::graph::VertexId;

/// Errors produced by graph exploration, operator assembly and the solvers.
#[derive(Debug, Error)]
pub enum HeatError {
    /// The neighbor oracle broke one of its structural promises
    /// (asymmetric adjacency, self-loop, isolated vertex, disconnected file graph).
    #[error("structural graph error: {0}")]
    Structural(String),

    /// A finite domain does not satisfy what the operation needs,
    /// e.g. an empty interior or support escaping the interior.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-side precondition failed (negative time, non-symmetric matrix, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("exploration limit of {limit} vertices exceeded")]
    ExplorationLimit { limit: usize },

    #[error("vertex {0} does not belong to the graph")]
    UnknownVertex(VertexId),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HeatError>;
