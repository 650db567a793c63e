use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid matrix shape {rows}x{cols} for {len} entries")]
    InvalidShape { rows: usize, cols: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is indefinite (eigenvalue {eigenvalue:e})")]
    IndefiniteInput { eigenvalue: f64 },
    #[error("Cholesky factorization broke down at pivot {pivot}")]
    CholeskyBreakdown { pivot: usize },
    #[error("scale must be finite and non-negative, got {0}")]
    InvalidScale(f64),
    #[error("invalid correlation profile: {0}")]
    InvalidProfile(&'static str),
    #[error("input covariance uses power {used} above the budget {budget}")]
    PowerBudgetExceeded { used: f64, budget: f64 },
    #[error("no positive eigenmode to allocate power to")]
    NoPositiveModes,
    #[error("empirical distribution has no samples")]
    EmptyDistribution,
    #[error("outage percentage must lie in (0, 100), got {0}")]
    InvalidPercent(f64),
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(&'static str),
}
