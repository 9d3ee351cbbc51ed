use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} out of range: {1}")]
    OutOfRange(&'static str, String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("polytope is unbounded")]
    UnboundedPolytope,
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("infeasible: {0}")]
    Infeasible(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point is off the hyperboloid by {0:e}")]
    OffHyperboloid(f64),
    #[error("degenerate rounding: scaled vector collapsed to zero")]
    DegenerateRounding,
    #[error("containment violated at n = {0}")]
    ContainmentViolation(i64),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("quadrature failed to reach tolerance {0:e}")]
    QuadratureFailure(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
