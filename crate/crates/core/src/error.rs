//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: radial domains need N >= 3")]
    InvalidDimension(usize),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("domain error at node {node:?}: {what} (s = {s})")]
    Domain {
        node: Option<usize>,
        s: f64,
        what: &'static str,
    },
    #[error("mesh mismatch: field has {got} values, mesh has {expected} nodes")]
    MeshMismatch { expected: usize, got: usize },
    #[error("singular system at row {row}")]
    SingularSystem { row: usize },
    #[error("krylov breakdown after {iterations} iterations: {reason}")]
    Breakdown {
        iterations: usize,
        reason: &'static str,
    },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("unsupported transform: {0}")]
    UnsupportedTransform(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Attach a node index to a domain error raised by a point evaluation.
    pub fn at_node(self, node: usize) -> Self {
        match self {
            Error::Domain { s, what, .. } => Error::Domain {
                node: Some(node),
                s,
                what,
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
