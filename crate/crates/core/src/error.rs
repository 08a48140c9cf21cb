use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("refinement factor {0} not in {{2, 4}}")]
    RefineFactor(usize),

    #[error("modular integral diverged numerically (exponent beyond {limit})")]
    OverflowDiverged { limit: f64 },

    #[error("could not bracket the Luxemburg norm: {0}")]
    BracketFailure(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("unknown profile family: {0}")]
    UnknownFamily(String),

    #[error("semigroup method mismatch: {0}")]
    MethodMismatch(String),

    #[error("periodic wrap mass {mass:.3e} exceeds {limit:.1e}")]
    WrapMassExceeded { mass: f64, limit: f64 },

    #[error("hypotheses violated: {}", .0.join("; "))]
    HypothesisViolated(Vec<String>),

    #[error("Picard iterates diverging after {iterations} iterations")]
    NoContraction { iterations: usize },

    #[error("Picard iteration limit {iterations} reached (distance {distance:.3e})")]
    IterLimit { iterations: usize, distance: f64 },

    #[error("insufficient blow-up tail: {have} samples, need {need}")]
    InsufficientTail { have: usize, need: usize },

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("malformed grid file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
