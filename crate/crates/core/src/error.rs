use thiserror::Error;

/// Errors raised by mesh construction and topology queries.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("interface has {0} edges; an even number is required to pair them into macro-edges")]
    OddInterface(usize),
    #[error("degenerate rectangle or cell layout: {0}")]
    DegenerateLayout(String),
    #[error("subdivision counts must be at least 1 ({0})")]
    ZeroSubdivision(String),
    #[error("interface is not a simple open chain: {0}")]
    NonChainInterface(String),
    #[error("mesh invariant violated: {0}")]
    Invariant(String),
    #[error("triangle {0} is degenerate")]
    DegenerateTriangle(usize),
}

/// Top-level error type for solves and adaptive runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("Newton iteration did not converge in {iterations} iterations (increment history {history:?})")]
    Divergence { iterations: usize, history: Vec<f64> },
    #[error("sparse factorization failed ({reason}); penalization weight {penalty:e}, system size {size}")]
    Factorization { reason: String, penalty: f64, size: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("estimator failure: {0}")]
    Estimator(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
