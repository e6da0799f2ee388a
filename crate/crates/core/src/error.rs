use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {k} out of range 0..={n}")]
    IndexOutOfRange { k: usize, n: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("inequality is not in core form: {0}")]
    NotCore(String),

    #[error("inequality is not valid for the hull")]
    NotValid,

    #[error("permutation count {count} exceeds cap {cap}")]
    CapExceeded { count: String, cap: u64 },

    #[error("vertex budget exceeded: {needed} vertices needed, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("polynomial is neither supermodular nor submodular over the box vertices")]
    NotSupermodular,

    #[error("open problem: {0}")]
    OpenProblem(String),

    #[error("no closed-form hull family applies: {0}")]
    Unsupported(String),

    #[error("point is not on the graph: {0}")]
    NotInGraph(String),

    #[error("point coordinates are not sorted nonincreasing")]
    NotSorted,

    #[error("not a box vertex: {0}")]
    NotBoxVertex(String),

    #[error("formulation check failed: {0}")]
    FormulationViolated(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("mismatched inequality orientation: {0}")]
    MismatchedOrientation(String),
}

pub type Result<T, E = HullError> = std::result::Result<T, E>;
