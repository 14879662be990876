use thiserror::Error;

pub type Result<T> = std::result::Result<T, EurError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EurError {
    #[error("input out of domain: {0}")]
    Domain(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("no distribution of length {dim} has maximum probability {max_prob}")]
    InfeasibleMaximum { max_prob: f64, dim: usize },

    #[error("P_A = {p_a} is below c^2 = {c_squared}; saturation would need P_B > 1")]
    NoSaturatingPartner { p_a: f64, c_squared: f64 },

    #[error("overlap c = {c} exceeds 1/sqrt({m}), outside the validity range of H_{m}")]
    ValidityRange { c: f64, m: usize },

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("overlap c = {0} is unreachable by a qubit rotation (needs c >= 1/sqrt(2))")]
    UnreachableOverlap(f64),
}
