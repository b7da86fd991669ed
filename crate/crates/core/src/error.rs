use thiserror::Error;

use crate::exprlang::EvalError;

/// Failures of the pointwise geometric pipeline.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum GeometryError {
    #[error("nonzero fiber point required")]
    NonzeroFiberRequired,
    #[error("metric is singular (condition number {condition:e})")]
    SingularMetric { condition: f64 },
    #[error("metric is not Hermitian (defect {defect:e}); the Finsler function is probably not real")]
    NonHermitian { defect: f64 },
    #[error("frame change is singular (|det M| = {det:e})")]
    SingularFrame { det: f64 },
    #[error("invalid frame change: {0}")]
    InvalidFrame(alloc::string::String),
    #[error("probe system is ill-conditioned: {0}")]
    IllConditionedProbe(&'static str),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
}
