use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside its documented domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An input violates a structural precondition (e.g. a non-Hermitian Hamiltonian).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A numerical routine failed or produced values outside tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// The target entropy lies above the infinite-temperature maximum N ln 2.
    #[error("target entropy {target} exceeds maximum {max}")]
    EntropyAbove { target: f64, max: f64 },

    /// The target entropy needs an inverse temperature above the supported maximum.
    #[error("target entropy {target} not reached below beta = {beta_max:e}")]
    BetaLimit { target: f64, beta_max: f64 },

    /// The target entropy is at or below the residual ground-state entropy ln g0.
    #[error("target entropy {target} is at or below the ground-state floor ln({degeneracy}) = {floor}")]
    EntropyFloor {
        target: f64,
        floor: f64,
        degeneracy: usize,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}
