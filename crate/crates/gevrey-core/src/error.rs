//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by grid construction, norms, symbol estimation and the
/// operator paths. Messages name the violated hypothesis so that batch
/// reports stay self-explanatory.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GevreyError {
    #[error("grid dimension must lie in 1..=3, got {0}")]
    BadDimension(usize),
    #[error("points per axis must be a power of two >= 4, got {0}")]
    BadPointCount(usize),
    #[error("period length must be positive, got {0}")]
    BadPeriod(f64),
    #[error("array length {got} does not match grid ({expected} points)")]
    LengthMismatch { got: usize, expected: usize },
    #[error("operands live on different grids")]
    GridMismatch,
    #[error(
        "weight overflow: tau * <xi_max>^sigma = {exponent:.3} exceeds 700; \
         largest admissible tau for this grid is {tau_max:.6e}"
    )]
    WeightOverflow { exponent: f64, tau_max: f64 },
    #[error("outside embedding range: tau = {tau} must satisfy tau < s R^(-1/s) = {threshold}")]
    OutsideEmbeddingRange { tau: f64, threshold: f64 },
    #[error("parameter out of domain: {0}")]
    BadParameter(String),
    #[error("derivative order {order} exceeds the finite-difference limit {limit}")]
    OrderLimit { order: usize, limit: usize },
    #[error("symbol has no analytic evaluator but off-grid probes were requested")]
    MissingEvaluator,
    #[error("symbol support of radius {radius} does not fit inside period {period}")]
    SupportExceedsPeriod { radius: f64, period: f64 },
    #[error(
        "h = {0} is not a dyadic rational k/2^r compatible with this grid; \
         use the direct quadrature path instead"
    )]
    IncommensurableH(f64),
    #[error("frequency range spans {got:.2} dyadic octaves, need at least {need}")]
    FitRangeTooShort { got: f64, need: f64 },
    #[error("theorem hypothesis violated: {0}")]
    HypothesisViolated(String),
}

pub type Result<T> = std::result::Result<T, GevreyError>;

impl GevreyError {
    /// Shorthand for domain violations discovered while validating inputs.
    pub fn bad_param(msg: impl Into<String>) -> Self {
        GevreyError::BadParameter(msg.into())
    }

    /// Shorthand for named theorem-hypothesis violations.
    pub fn hypothesis(msg: impl Into<String>) -> Self {
        GevreyError::HypothesisViolated(msg.into())
    }
}
