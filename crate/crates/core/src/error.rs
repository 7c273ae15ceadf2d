use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("divisor is not ample: {0}")]
    NotAmple(String),
    #[error("the log Fano quotient is not log Fano (deg(K+B) = {0} is not negative)")]
    NotLogFano(String),
    #[error("the cone singularity is not klt")]
    NotKlt,
    #[error("epsilon must lie in (0, 1], got {0}")]
    BadEpsilon(String),
    #[error("isotropy bound must be positive")]
    BadIsotropyBound,
    #[error("divisor of degree {0} is not principal on P^1")]
    NonPrincipal(String),
    #[error("coefficient at {0} is integral, the local chart is smooth")]
    IntegralPoint(String),
    #[error("generator or relation search bound too small: new generator needed in degree {degree} > {bound}")]
    BoundTooSmall { degree: u64, bound: u64 },
    #[error("singular linear system")]
    SingularMatrix,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid toric divisor: {0}")]
    InvalidToricDivisor(String),
    #[error("divisor is not Q-Cartier on cone {0}")]
    NonCartierOnCone(usize),
    #[error("K_Y + B is not Q-Cartier on cone {0}")]
    NotQCartierPair(usize),
    #[error("cone of X is not Q-Gorenstein")]
    NotQGorenstein,
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("vector {0:?} is not in the support of the fan")]
    NotInSupport(Vec<i64>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl ConeError {
    /// Violations of invariants that must hold for every valid input.
    pub fn is_internal(&self) -> bool {
        matches!(self, ConeError::Internal(_) | ConeError::SingularMatrix)
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, ConeError::Parse(_))
    }
}

pub type Result<T, E = ConeError> = std::result::Result<T, E>;
