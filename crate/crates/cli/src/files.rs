//! Model files and point documents.

use std::path::Path;

use finsler_core::{Complex64, ModelSource, Point, StructureEntry};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    n: usize,
    m: usize,
    rho: Vec<Vec<String>>,
    #[serde(default)]
    structure: Vec<StructureFile>,
    finsler: String,
    #[serde(default)]
    domain: Option<DomainFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureFile {
    alpha: usize,
    beta: usize,
    gamma: usize,
    expr: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DomainFile {
    z_box: Option<Vec<[f64; 2]>>,
    u_annulus: Option<[f64; 2]>,
}

/// Raw bytes plus the parsed source, so reports can hash exactly what was read.
pub struct LoadedFile {
    pub bytes: Vec<u8>,
    pub source: ModelSource,
}

pub fn read_model(path: &Path) -> Result<LoadedFile, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
    let source = parse_model(&bytes)?;
    Ok(LoadedFile { bytes, source })
}

pub fn parse_model(bytes: &[u8]) -> Result<ModelSource, CliError> {
    let f: ModelFile = serde_json::from_slice(bytes).map_err(|e| CliError::Malformed(format!("model file: {e}")))?;
    let domain = f.domain.unwrap_or(DomainFile { z_box: None, u_annulus: None });
    Ok(ModelSource {
        n: f.n,
        m: f.m,
        rho: f.rho,
        structure: f
            .structure
            .into_iter()
            .map(|s| StructureEntry { alpha: s.alpha, beta: s.beta, gamma: s.gamma, expr: s.expr })
            .collect(),
        finsler: f.finsler,
        z_box: domain.z_box,
        u_annulus: domain.u_annulus,
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    z: Vec<[f64; 2]>,
    u: Vec<[f64; 2]>,
}

/// `--at` takes the point document inline, or a path to a file holding it.
pub fn parse_point(arg: &str) -> Result<Point, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Malformed(format!("cannot read point {arg}: {e}")))?
    };
    let p: PointFile = serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("point document: {e}")))?;
    let c = |v: Vec<[f64; 2]>| v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
    Ok(Point::new(c(p.z), c(p.u)))
}
