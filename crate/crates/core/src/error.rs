use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NepError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("rank deficient: column {column} has residual {residual:e} below tolerance {tolerance:e}")]
    RankDeficient {
        column: usize,
        residual: f64,
        tolerance: f64,
    },
    #[error("{routine} did not converge within {budget} iterations")]
    ConvergenceFailure { routine: &'static str, budget: usize },
    #[error("dimension {dim} exceeds desk-scale guard {limit}")]
    DimensionGuard { dim: usize, limit: usize },
    #[error("matrix is numerically singular (sigma_min / sigma_max = {ratio:e})")]
    NearSingular { ratio: f64 },
    #[error("evaluation point {0} hits a pole")]
    PoleHit(Complex64),
    #[error("{value} is not an eigenvalue (sigma_min = {sigma_min:e})")]
    NotAnEigenvalue { value: Complex64, sigma_min: f64 },
    #[error("deviation {0} is too close to one; the target vector is orthogonal to the subspace")]
    DegenerateDeviation(f64),
    #[error("exponential terms cannot be polynomialized")]
    UnsupportedTerm,
    #[error("Newton iteration did not converge after {iterations} steps (last iterate {last})")]
    NonConverged { iterations: usize, last: Complex64 },
    #[error("spectrum is empty")]
    EmptySpectrum,
    #[error("sigma_min(B(lambda*)) = {0:e} is too small; rate machinery inapplicable")]
    DegenerateSigma(f64),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("residual ratio undefined: smallest singular value is {0:e}")]
    DegenerateRatio(f64),
    #[error("subspace construction failed: {0}")]
    ConstructionFailed(String),
    #[error("problem format: {0}")]
    Format(String),
}

impl NepError {
    /// True for errors that mean "this bound does not apply here" rather than a failure.
    pub fn is_inapplicable(&self) -> bool {
        matches!(
            self,
            NepError::HypothesisFailed(_) | NepError::DegenerateSigma(_) | NepError::DegenerateRatio(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, NepError>;
