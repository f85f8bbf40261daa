use thiserror::Error;

/// Errors raised by the numerical and algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("grid crosses the branch cut at gamma = ±pi")]
    BranchCut,

    #[error("sample at node {node} (s = {s}, gamma = {gamma}) is not positive definite")]
    NotPositiveDefinite { node: usize, s: f64, gamma: f64 },

    #[error("non-finite sample at node {0}")]
    NonFinite(usize),

    #[error("newton iteration did not converge after {iterations} iterations (last residual {last_residual:e})")]
    NotConverged { iterations: usize, last_residual: f64, history: Vec<f64> },

    #[error("singular jacobian at newton iteration {0}")]
    SingularJacobian(usize),

    #[error("theta samples are not uniformly spaced")]
    NonUniformSpacing,

    #[error("family solve failed at theta = {theta}: {source}")]
    FamilyMember {
        theta: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
