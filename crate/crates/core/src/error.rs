use thiserror::Error;

use crate::spectral::EigenPair;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph order {n} exceeds the configured limit of {limit} vertices")]
    GraphTooLarge { n: usize, limit: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertices {u} and {v} are not adjacent, so the set is not a clique")]
    NotAClique { u: usize, v: usize },

    #[error("rewiring gave up after {attempts} consecutive failed draws while restoring edge ({u}, {v})")]
    RewireExhausted { u: usize, v: usize, attempts: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("power iteration stopped after {} iterations with residual {:.3e}", .0.iterations, .0.residual)]
    NonConverged(Box<EigenPair>),

    #[error("message passing produced a non-finite value at iteration {iteration}")]
    NumericalBlowup { iteration: usize },

    #[error("least-squares fit is singular: {0}")]
    SingularFit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
