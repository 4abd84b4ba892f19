use thiserror::Error;

/// Text could not be parsed; `position` is a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("variable lists differ")]
    VariableMismatch,
    #[error("invalid JSON polynomial: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not allowed (must be a prime other than 2 and 3)")]
    BadCharacteristic(u64),
    #[error("polynomial has zero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("degree {0} is outside the solvable range 1..=4")]
    DegreeOutOfRange(usize),
    #[error("the zero polynomial has every element as a root")]
    ZeroPolynomial,
    #[error("root index {index} out of range for degree {degree}")]
    RootIndex { index: usize, degree: usize },
    #[error("finite tower degree {0} exceeds the cap")]
    TowerCapExceeded(usize),
    #[error("{0}")]
    Numeric(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("point does not lie on the system (form {0} does not vanish)")]
    PointNotOnSystem(usize),
    #[error("zero vector is not a projective point")]
    ZeroPoint,
    #[error("point {0} lies in the span of its predecessors")]
    DependentPoint(usize),
    #[error("points are linearly dependent")]
    RankDeficient,
    #[error("form {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: u32, found: u32 },
    #[error("chart is degenerate: linear forms leave no room in the complement")]
    DegenerateChart,
    #[error("ambient dimension {ambient} too small to cut a {span}-dimensional span")]
    AmbientTooSmall { ambient: usize, span: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("system has no points: linear forms are inconsistent")]
    NoPoints,
    #[error("forms of degree {0} are not supported (degrees must be at most 4)")]
    DegreeTooHigh(u32),
    #[error("retry budget exhausted at step {step}: {last}")]
    RetriesExhausted { step: String, last: String },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("intermediate query exceeds 64-bit range")]
    Overflow,
    #[error("degree {0} not in {{2,3,4}}")]
    BadDegree(u32),
    #[error("m must be at least 1")]
    ZeroCount,
    #[error("trace replay mismatch at step {0}")]
    Replay(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("node {node} references {arg}, which is not an earlier node")]
    NotAcyclic { node: usize, arg: usize },
    #[error("root_of node {0} has degree outside 2..=4")]
    RootDegree(usize),
    #[error("root_of node {node}: index {index} out of range")]
    RootIndex { node: usize, index: usize },
    #[error("division by zero at node {0}")]
    DivisionByZero(usize),
    #[error("root_of node {0}: leading coefficient vanishes")]
    LeadingZero(usize),
    #[error("precision insufficient to separate roots (cap {0} digits reached)")]
    PrecisionCap(u32),
    #[error("invalid certificate JSON: {0}")]
    Json(String),
}
