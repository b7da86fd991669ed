//! Residual bookkeeping and the check suites run over sampled points.

mod checks;
mod residual;

pub use checks::{jets_residual, overall, run_checks, run_checks_at, CheckKind, CheckOptions, CheckResult, FD_TOLERANCE};
pub use residual::{worst, Residual};
