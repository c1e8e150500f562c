use alloc::string::String;

/// Errors raised by basis construction, curvature evaluation and solving.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("n must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("split parameter p = {p} is outside 0..={n}")]
    SplitOutOfRange { n: usize, p: usize },
    #[error("printed Scheme 2 equations need 1 <= p <= n-1 (got n = {n}, p = {p}); use Scheme 1")]
    DegenerateSplit { n: usize, p: usize },
    #[error("Gram matrix is singular: generators are linearly dependent")]
    SingularGram,
    #[error("Gram matrix is not diagonal (entry ({0}, {1}))")]
    NonOrthogonalBasis(usize, usize),
    #[error("metric constant {index} is not strictly positive ({value})")]
    NonPositiveMetric { index: usize, value: f64 },
    #[error("expected {expected} metric constants, got {got}")]
    MetricArity { expected: usize, got: usize },
    #[error("metric is not Einstein within tolerance (residual {residual:e})")]
    NotEinstein { residual: f64 },
    #[error("Einstein constant vanishes; I1 is undefined")]
    ZeroLambda,
    #[error("starting point must be strictly positive")]
    NonPositiveStart,
    #[error("Newton iteration failed: {0}")]
    NoConvergence(String),
    #[error("singular linear system")]
    SingularSystem,
}

pub type Result<T> = core::result::Result<T, Error>;
