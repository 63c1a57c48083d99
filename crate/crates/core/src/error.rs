use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division leaves a nonzero remainder")]
    NonExactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("evaluation at zero of a polynomial with negative exponents")]
    PoleAtZero,
    #[error("pole of the solution at the evaluation point")]
    PoleHit,
    #[error("zero of the solution at the evaluation point")]
    ZeroHit,
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("branch ambiguity: {0}")]
    BranchAmbiguity(String),
    #[error("roots of P collide (min gap {0:e})")]
    RootCollision(f64),
    #[error("point lies on a branch cut")]
    OnCut,
    #[error("point is the origin")]
    AtOrigin,
    #[error("quadrature failed to reach tolerance ({0:e})")]
    QuadratureFailure(f64),
    #[error("bracket failure: {0}")]
    BracketFailure(String),
    #[error("continuation reached the boundary of the domain at y = {re}+{im}i")]
    BoundaryHit { re: f64, im: f64 },
    #[error("continuation stalled: {0}")]
    ContinuationStall(String),
    #[error("Newton iteration did not converge (residual {0:e})")]
    NewtonFailure(f64),
    #[error("reality check failed: {0}")]
    RealityViolation(String),
    #[error("trajectory tracing stalled: {0}")]
    TraceStall(String),
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("path construction failed: {0}")]
    PathConstructionFailure(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
