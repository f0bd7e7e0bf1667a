use thiserror::Error;

/// Everything the library can refuse to do.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("unknown vertex label `{0}`")]
    UnknownVertex(String),

    #[error("self loop on vertex `{0}`")]
    SelfLoop(String),

    #[error("hyperedge needs at least two vertices, got {0}")]
    SingletonHyperedge(usize),

    #[error("boundary vertex already present (`{0}`)")]
    BoundaryAlreadyPresent(String),

    #[error("epsilon must be > 0, got {0}")]
    NonPositiveEpsilon(f64),

    #[error("t must be > 0, got {0}")]
    NonPositiveT(f64),

    #[error("alpha must be > 0, got {0}")]
    NonPositiveAlpha(f64),

    #[error("expected {expected} coordinate values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("energy is infinite at the requested point")]
    InfiniteEnergy,

    #[error("no subdifferential: {0}")]
    DomainBoundary(String),

    #[error("invalid construction: {0}")]
    ConstructionError(String),

    #[error("linear functional is identically zero")]
    ZeroLinear,

    #[error("instance has {got} coordinate classes, cap is {cap}")]
    TooLarge { got: usize, cap: usize },

    #[error("form is not a single-exponent power form: {0}")]
    MixedExponents(String),

    #[error("operand carries constraints that break additivity: {0}")]
    DirichletOperand(String),

    #[error("malformed input: {0}")]
    Parse(String),
}
