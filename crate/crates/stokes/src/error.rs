use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at z = {0}")]
    PoleError(String),
    #[error("logarithmic case: every applicable 2F1 transformation is degenerate ({0})")]
    LogarithmicCase(String),
    #[error("argument {0} lies on the branch cut [1, inf)")]
    BranchCut(String),
    #[error("invalid degenerate hypergeometric parameters: {0}")]
    InvalidDegenerate(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unsupported regime: {0}")]
    RegimeUnsupported(String),
    #[error("divergent series: {0}")]
    DivergentSeries(String),
    #[error("excluded logarithmic case: {0}")]
    ExcludedCase(String),
    #[error("case not covered by the closed forms: {0}")]
    CaseNotCovered(String),
    #[error("ray {theta} is within {distance:.3e} rad of singular direction {singular}")]
    RayTooCloseToSingular { theta: f64, singular: f64, distance: f64 },
    #[error("ray {theta} violates the convergence cone for arg x = {arg_x}")]
    ConvergenceConeViolation { theta: f64, arg_x: f64 },
    #[error("rays {0} and {1} are separated by a singular direction")]
    InconsistentRays(f64, f64),
    #[error("quadrature failed: estimated error {est_error:.3e} exceeds tolerance {tol:.3e}")]
    QuadratureFailure { est_error: f64, tol: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("convolution grid too coarse: estimate {est_error:.3e} > tolerance {tol:.3e}")]
    GridTooCoarse { est_error: f64, tol: f64 },
    #[error("ill-conditioned jump basis: {0}")]
    IllConditioned(String),
    #[error("finite-difference step unstable: {0}")]
    StepUnstable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
