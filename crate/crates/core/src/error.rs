use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigen-solver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid matrix data: {0}")]
    InvalidMatrix(String),

    #[error("invalid monotone function: {0}")]
    InvalidMonotone(String),

    #[error("relation is not a partial order: {0}")]
    InvalidPoset(String),

    #[error("transitive closure creates a cycle through points {0} and {1}")]
    Cycle(usize, usize),

    #[error("invalid isocone: {0}")]
    InvalidIsocone(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("morphism is not surjective: {0}")]
    NotSurjective(String),

    #[error("point outside the domain: {0}")]
    Domain(String),

    #[error("degenerate finite Dirac operator (d1 = d2 = {0}): Connes distance is undefined")]
    DegenerateDirac(f64),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("invalid matrix field: {0}")]
    InvalidField(String),
}

pub type Result<T> = std::result::Result<T, Error>;
