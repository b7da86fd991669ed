//! File formats, reports and command implementations behind the `finsler`
//! binary. Commands return their output and an exit code instead of
//! printing, so tests can drive them directly.

pub mod eval;
pub mod files;
pub mod report;

use std::path::Path;

use finsler_core::algebroid::{ValidationOptions, ValidationReport};
use finsler_core::verify::{run_checks, CheckKind, CheckOptions};
use finsler_core::{AlgebroidModel, ModelError};
use thiserror::Error;

pub use eval::Quantity;
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or ill-formed input: exit code 2.
    #[error("{0}")]
    Malformed(String),
    /// A valid input that fails a check or cannot be evaluated: exit code 1.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

/// Result of a command: text for stdout and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn load(path: &Path, opts: &ValidationOptions) -> Result<(Vec<u8>, AlgebroidModel, ValidationReport), CliError> {
    let file = files::read_model(path)?;
    match AlgebroidModel::load(&file.source, opts) {
        Ok((model, report)) => Ok((file.bytes, model, report)),
        Err(e @ (ModelError::Schema(_) | ModelError::Parse { .. })) => Err(CliError::Malformed(e.to_string())),
        Err(e) => Err(CliError::Failure(format!("invalid model: {e}"))),
    }
}

pub fn validate(path: &Path, jacobi_as_warning: bool) -> Result<Outcome, CliError> {
    let opts = ValidationOptions { jacobi_as_warning, ..ValidationOptions::default() };
    let (_, model, report) = load(path, &opts)?;
    let mut stdout = format!(
        "valid: n = {}, m = {}; max residuals: antisymmetry {:.3e}, anchor compatibility {:.3e}, Jacobi {:.3e}\n",
        model.n(),
        model.m(),
        report.max_antisymmetry,
        report.max_anchor,
        report.max_jacobi
    );
    for w in &report.warnings {
        stdout.push_str(&format!("warning: {w}\n"));
    }
    Ok(Outcome { stdout, code: 0 })
}

/// `all` selects every suite, `default` the nine standard ones.
pub fn parse_checks(list: &str) -> Result<Vec<CheckKind>, CliError> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match name {
            "all" => out.extend(CheckKind::DEFAULT.iter().chain(CheckKind::EXTRA.iter())),
            "default" => out.extend(CheckKind::DEFAULT),
            _ => out.push(
                CheckKind::from_name(name).ok_or_else(|| CliError::Malformed(format!("unknown check {name:?}")))?,
            ),
        }
    }
    if out.is_empty() {
        return Err(CliError::Malformed("no checks selected".into()));
    }
    let mut seen = Vec::new();
    out.retain(|k| if seen.contains(k) { false } else { seen.push(*k); true });
    Ok(out)
}

/// Runs the suites; the report is returned whatever the verdict.
pub fn check(path: &Path, kinds: &[CheckKind], opts: &CheckOptions) -> Result<(Report, i32), CliError> {
    if opts.points == 0 {
        return Err(CliError::Malformed("--points must be positive".into()));
    }
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(CliError::Malformed("--tol must be a positive number".into()));
    }
    let (bytes, model, validation) = load(path, &ValidationOptions::default())?;
    let results = run_checks(&model, kinds, opts);
    let report = Report::new(&bytes, opts, &validation, &results);
    let code = if report.overall == report::Verdict::Pass { 0 } else { 1 };
    Ok((report, code))
}

pub fn eval(path: &Path, at: &str, quantity: &str) -> Result<Outcome, CliError> {
    let q: Quantity = quantity.parse()?;
    let p = files::parse_point(at)?;
    let (_, model, _) = load(path, &ValidationOptions::default())?;
    let stdout = eval::evaluate(&model, &p, q)?;
    Ok(Outcome { stdout, code: 0 })
}
