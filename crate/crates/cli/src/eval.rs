//! `finsler eval`: named quantities at one point, printed with index labels.

use std::fmt::Write as _;
use std::str::FromStr;

use finsler_core::chernfinsler::{Depth, PointGeometry};
use finsler_core::prolongation::{kahler_residual, FrameVector, Prolongation};
use finsler_core::{AlgebroidModel, Complex64, GeometryError, Point};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    F,
    H,
    N,
    L,
    C,
    R,
    Torsion,
    Curvature,
    Kahler,
}

impl FromStr for Quantity {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "F" => Quantity::F,
            "h" => Quantity::H,
            "N" => Quantity::N,
            "L" => Quantity::L,
            "C" => Quantity::C,
            "R" => Quantity::R,
            "torsion" => Quantity::Torsion,
            "curvature" => Quantity::Curvature,
            "kahler" => Quantity::Kahler,
            _ => {
                return Err(CliError::Malformed(format!(
                    "unknown quantity {s:?} (expected F, h, N, L, C, R, torsion, curvature or kahler)"
                )))
            }
        })
    }
}

/// Shortest decimal after rounding to 12 significant digits.
fn real(x: f64) -> String {
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let r = if r == 0.0 { 0.0 } else { r };
    if r != 0.0 && !(1e-4..1e12).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

pub fn format_complex(c: Complex64) -> String {
    let (re, im) = (real(c.re), real(c.im));
    match (re.as_str(), im.as_str()) {
        (_, "0") => re,
        ("0", _) => format!("{im}i"),
        _ if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

fn idx(m: usize, ids: &[usize]) -> String {
    let parts: Vec<String> = ids.iter().map(|i| (i + 1).to_string()).collect();
    parts.join(if m > 9 { "," } else { "" })
}

fn geometry_error(e: GeometryError) -> CliError {
    match e {
        GeometryError::NonzeroFiberRequired => CliError::Malformed(e.to_string()),
        _ => CliError::Failure(e.to_string()),
    }
}

fn frame_line(out: &mut String, label: &str, coeffs: &[Complex64], m: usize) {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
        .map(|(i, c)| format!("({}) {}", format_complex(*c), FrameVector::from_position(i, m)))
        .collect();
    if !terms.is_empty() {
        let _ = writeln!(out, "{label} = {}", terms.join(" + "));
    }
}

/// Renders `q` at `p` as `label = value` lines.
pub fn evaluate(model: &AlgebroidModel, p: &Point, q: Quantity) -> Result<String, CliError> {
    let (n, m) = (model.n(), model.m());
    if p.z.len() != n || p.u.len() != m {
        return Err(CliError::Malformed(format!(
            "point has {} z and {} u entries, model needs {n} and {m}",
            p.z.len(),
            p.u.len()
        )));
    }
    if p.fiber_norm() == 0.0 {
        return Err(geometry_error(GeometryError::NonzeroFiberRequired));
    }
    let mut out = String::new();
    let line = |out: &mut String, label: String, c: Complex64| {
        let _ = writeln!(out, "{label} = {}", format_complex(c));
    };
    match q {
        Quantity::F => {
            let f = model.finsler().evaluate(p).map_err(|e| CliError::Failure(e.to_string()))?;
            line(&mut out, "F".into(), f);
        }
        Quantity::H | Quantity::N | Quantity::L | Quantity::C => {
            let g = PointGeometry::compute(model, p, Depth::Values).map_err(geometry_error)?;
            for a in 0..m {
                for b in 0..m {
                    match q {
                        Quantity::H => line(&mut out, format!("h_{}bar", idx(m, &[a, b])), g.h[a][b].value),
                        Quantity::N => line(&mut out, format!("N^{}_{}", a + 1, b + 1), g.n[a][b].value),
                        _ => {
                            for c in 0..m {
                                let (name, t) = if q == Quantity::L { ("L", &g.l) } else { ("C", &g.c) };
                                line(&mut out, format!("{name}^{}_{}", a + 1, idx(m, &[b, c])), t[a][b][c].value);
                            }
                        }
                    }
                }
            }
        }
        Quantity::R | Quantity::Torsion | Quantity::Curvature | Quantity::Kahler => {
            let pr = Prolongation::compute(model, p).map_err(geometry_error)?;
            match q {
                Quantity::R => {
                    for s in 0..m {
                        for a in 0..m {
                            for b in 0..m {
                                line(&mut out, format!("R^{}_{}", s + 1, idx(m, &[a, b])), pr.brackets.r[s][a][b]);
                            }
                        }
                    }
                }
                Quantity::Kahler => {
                    let k = kahler_residual(&pr.geometry);
                    for s in 0..m {
                        for a in 0..m {
                            for c in 0..m {
                                line(&mut out, format!("K^{}_{}", s + 1, idx(m, &[a, c])), k[s][a][c]);
                            }
                        }
                    }
                }
                Quantity::Torsion => {
                    let all = FrameVector::all(m);
                    for (i, &a) in all.iter().enumerate() {
                        for &b in &all[i + 1..] {
                            frame_line(&mut out, &format!("T({a},{b})"), pr.torsion_general.get(a, b), m);
                        }
                    }
                }
                _ => {
                    let all = FrameVector::all(m);
                    for (i, &z) in all.iter().enumerate() {
                        for &w in &all[i + 1..] {
                            for &v in &all {
                                frame_line(&mut out, &format!("R({z},{w}){v}"), pr.curvature.get(z, w, v), m);
                            }
                        }
                    }
                }
            }
            if out.is_empty() {
                out.push_str("all components vanish\n");
            }
        }
    }
    Ok(out)
}
