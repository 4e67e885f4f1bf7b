use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parameters violate sum(alpha) = 0: sum = {sum:e}")]
    ZeroSumViolation { sum: f64 },
    #[error("positivity violation at mu = {mu}: beta_mu = {beta} <= -{mu}")]
    PositivityViolation { mu: usize, beta: f64 },
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole in denominator parameter {0}")]
    PoleInDenominator(f64),
    #[error("divergent series: p > q + 1 with nonzero argument")]
    DivergentSeries,
    #[error("no convergence after {terms} terms in {what}")]
    NoConvergence { what: &'static str, terms: usize },
    #[error("cancellation loss (condition estimate {0:e})")]
    CancellationLoss(f64),
    #[error("sector error: mu = {mu} not allowed for alpha = {alpha}, lambda = {lambda}")]
    Sector { mu: usize, alpha: usize, lambda: usize },
    #[error("no positivity certificate: {0}")]
    PositivityUnavailable(String),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("unsupported operator: {0}")]
    UnsupportedOp(String),
    #[error("non-polynomial result: {0}")]
    NonPolynomialResult(String),
    #[error("configuration error: {0}")]
    Config(String),
}
