//! The check report written by `finsler check`.

use std::fmt::Write as _;

use finsler_core::algebroid::ValidationReport;
use finsler_core::verify::{CheckOptions, CheckResult};
use finsler_core::Point;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct Report {
    pub model_hash: String,
    pub seed: u64,
    pub points: usize,
    pub tolerance: f64,
    pub validation: ValidationSummary,
    pub checks: Vec<CheckEntry>,
    pub overall: Verdict,
}

#[derive(Debug, Serialize)]
pub struct ValidationSummary {
    pub max_antisymmetry: f64,
    pub max_anchor: f64,
    pub max_jacobi: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct CheckEntry {
    pub name: &'static str,
    /// `None` when some point could not be evaluated.
    pub max: Option<f64>,
    pub mean: Option<f64>,
    pub worst_point: Option<PointDoc>,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct PointDoc {
    pub z: Vec<[f64; 2]>,
    pub u: Vec<[f64; 2]>,
}

impl From<&Point> for PointDoc {
    fn from(p: &Point) -> Self {
        let c = |v: &[finsler_core::Complex64]| v.iter().map(|c| [c.re, c.im]).collect();
        Self { z: c(&p.z), u: c(&p.u) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn model_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(model_bytes: &[u8], opts: &CheckOptions, validation: &ValidationReport, results: &[CheckResult]) -> Self {
        let checks: Vec<CheckEntry> = results
            .iter()
            .map(|r| CheckEntry {
                name: r.kind.name(),
                max: finite(r.max),
                mean: finite(r.mean),
                worst_point: r.worst_point.as_ref().map(PointDoc::from),
                tolerance: r.tolerance,
                verdict: Verdict::from_bool(r.pass),
                note: r.note.clone(),
            })
            .collect();
        let overall = Verdict::from_bool(checks.iter().all(|c| c.verdict == Verdict::Pass));
        Self {
            model_hash: model_hash(model_bytes),
            seed: opts.seed,
            points: opts.points,
            tolerance: opts.tol,
            validation: ValidationSummary {
                max_antisymmetry: validation.max_antisymmetry,
                max_anchor: validation.max_anchor,
                max_jacobi: validation.max_jacobi,
                warnings: validation.warnings.clone(),
            },
            checks,
            overall,
        }
    }

    /// Pretty JSON with a trailing newline. Byte-stable for identical input.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let num = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3e}"));
            let _ = write!(
                out,
                "{:<width$}  max {:>10}  mean {:>10}  tol {:.0e}  {}",
                c.name,
                num(c.max),
                num(c.mean),
                c.tolerance,
                if c.verdict == Verdict::Pass { "pass" } else { "FAIL" },
            );
            if let Some(n) = &c.note {
                let _ = write!(out, "  ({n})");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "overall: {} ({} points, seed {})",
            if self.overall == Verdict::Pass { "pass" } else { "FAIL" },
            self.points,
            self.seed
        );
        out
    }
}
