use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use thiserror::Error;

use super::validate::Invariant;
use crate::calculus::{DerivativeCache, Domain, Point, SlotLayout, MAX_JET_ORDER};
use crate::exprlang::{parse, EvalError, Expr, ParseError, SlotContext, SlotKind, VarSlot};
use crate::linalg::Matrix;

/// One sparse structure-function entry `C^gamma_{alpha beta} = expr`
/// (1-based indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureEntry {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub expr: String,
}

/// Unparsed model description, as read from a model file.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSource {
    pub n: usize,
    pub m: usize,
    /// `rho[alpha][k]` is `ρ^k_α`.
    pub rho: Vec<Vec<String>>,
    pub structure: Vec<StructureEntry>,
    pub finsler: String,
    /// `[lo, hi]` ranges, `n` of them (shared by real and imaginary parts) or
    /// `2n` (real and imaginary parts separately).
    pub z_box: Option<Vec<[f64; 2]>>,
    pub u_annulus: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ModelError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("cannot parse {field}: {source}")]
    Parse { field: String, source: ParseError },
    #[error("{invariant} violated at z = {}: normalized residual {residual:e}{}", Witness(.witness), detail_suffix(.detail))]
    Validation { invariant: Invariant, witness: Vec<Complex64>, residual: f64, detail: String },
    #[error("cannot evaluate {field} at z = {}: {source}", Witness(.witness))]
    Eval { field: String, witness: Vec<Complex64>, source: EvalError },
}

fn detail_suffix(detail: &str) -> String {
    if detail.is_empty() {
        String::new()
    } else {
        format!(" ({detail})")
    }
}

struct Witness<'a>(&'a [Complex64]);

impl fmt::Display for Witness<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", c.re, c.im)?;
        }
        write!(f, ")")
    }
}

/// A parsed holomorphic Lie algebroid with a Finsler function.
///
/// Index layout: `rho[α][k] = ρ^k_α`, `structure[α][β][γ] = C^γ_{αβ}`
/// (0-based).
pub struct AlgebroidModel {
    n: usize,
    m: usize,
    rho: Vec<Vec<Expr>>,
    rho_d: Vec<Vec<Vec<Expr>>>,
    structure: Vec<Vec<Vec<Expr>>>,
    finsler: Expr,
    f_derivs: DerivativeCache,
    domain: Domain,
}

impl fmt::Debug for AlgebroidModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebroidModel")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("rho", &self.rho)
            .field("structure", &self.structure)
            .field("finsler", &self.finsler)
            .field("domain", &self.domain)
            .finish()
    }
}

fn base_only(e: &Expr, n: usize) -> bool {
    let mut ok = true;
    e.visit(&mut |node| {
        if let crate::exprlang::Node::Var(s) = node.node() {
            if s.kind != SlotKind::Z || s.index == 0 || s.index > n {
                ok = false;
            }
        }
    });
    ok
}

fn in_range(e: &Expr, n: usize, m: usize) -> bool {
    let mut ok = true;
    e.visit(&mut |node| {
        if let crate::exprlang::Node::Var(s) = node.node() {
            let bound = if s.kind.is_fiber() { m } else { n };
            if s.index == 0 || s.index > bound {
                ok = false;
            }
        }
    });
    ok
}

impl AlgebroidModel {
    /// Assemble a model from parsed parts. The structure array is used as
    /// given (no antisymmetrization); `validate` checks it.
    pub fn new(
        n: usize,
        m: usize,
        rho: Vec<Vec<Expr>>,
        structure: Vec<Vec<Vec<Expr>>>,
        finsler: Expr,
        domain: Domain,
    ) -> Result<Self, ModelError> {
        if n == 0 || m == 0 {
            return Err(ModelError::Schema("dimensions n and m must be positive".into()));
        }
        if rho.len() != m || rho.iter().any(|r| r.len() != n) {
            return Err(ModelError::Schema(format!("rho must have {m} rows of {n} entries")));
        }
        let dense = structure.len() == m
            && structure.iter().all(|a| a.len() == m && a.iter().all(|b| b.len() == m));
        if !dense {
            return Err(ModelError::Schema(format!("structure must be {m}x{m}x{m}")));
        }
        if domain.z_box.len() != 2 * n {
            return Err(ModelError::Schema(format!("domain needs {} real ranges", 2 * n)));
        }
        domain.check().map_err(|e| ModelError::Schema(e.into()))?;
        let holomorphic = rho.iter().flatten().chain(structure.iter().flatten().flatten()).all(|e| base_only(e, n));
        if !holomorphic {
            return Err(ModelError::Schema(
                "anchor and structure functions may only depend on z".into(),
            ));
        }
        if !in_range(&finsler, n, m) {
            return Err(ModelError::Schema("finsler references a variable out of range".into()));
        }
        let rho: Vec<Vec<Expr>> =
            rho.into_iter().map(|r| r.into_iter().map(|e| e.normalize()).collect()).collect();
        let rho_d = rho
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| (1..=n).map(|h| e.differentiate(VarSlot::z(h))).collect())
                    .collect()
            })
            .collect();
        let finsler = finsler.normalize();
        let f_derivs = DerivativeCache::new(finsler.clone(), SlotLayout::new(n, m), MAX_JET_ORDER);
        Ok(Self { n, m, rho, rho_d, structure, finsler, f_derivs, domain })
    }

    /// Parse a source document. Each structure entry also sets its
    /// antisymmetric partner unless that partner is given explicitly.
    pub fn from_source(src: &ModelSource) -> Result<Self, ModelError> {
        let (n, m) = (src.n, src.m);
        if n == 0 || m == 0 {
            return Err(ModelError::Schema("dimensions n and m must be positive".into()));
        }
        if src.rho.len() != m {
            return Err(ModelError::Schema(format!("rho must have {m} rows, found {}", src.rho.len())));
        }
        let holo = SlotContext::holomorphic(n, m);
        let mut rho = Vec::with_capacity(m);
        for (a, row) in src.rho.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::Schema(format!(
                    "rho row {} must have {n} entries, found {}",
                    a + 1,
                    row.len()
                )));
            }
            let mut parsed = Vec::with_capacity(n);
            for (k, text) in row.iter().enumerate() {
                let e = parse(text, holo).map_err(|source| ModelError::Parse {
                    field: format!("rho[{}][{}]", a + 1, k + 1),
                    source,
                })?;
                parsed.push(e);
            }
            rho.push(parsed);
        }

        let mut structure = vec![vec![vec![Expr::zero(); m]; m]; m];
        let mut explicit = vec![vec![vec![false; m]; m]; m];
        for entry in &src.structure {
            let idx = [entry.alpha, entry.beta, entry.gamma];
            if idx.iter().any(|&i| i == 0 || i > m) {
                return Err(ModelError::Schema(format!(
                    "structure index ({}, {}, {}) out of range 1..={m}",
                    entry.alpha, entry.beta, entry.gamma
                )));
            }
            let (a, b, g) = (entry.alpha - 1, entry.beta - 1, entry.gamma - 1);
            if explicit[a][b][g] {
                return Err(ModelError::Schema(format!(
                    "duplicate structure entry ({}, {}, {})",
                    entry.alpha, entry.beta, entry.gamma
                )));
            }
            let e = parse(&entry.expr, holo).map_err(|source| ModelError::Parse {
                field: format!("structure C^{}_{{{}{}}}", entry.gamma, entry.alpha, entry.beta),
                source,
            })?;
            explicit[a][b][g] = true;
            structure[a][b][g] = e.clone();
            if !explicit[b][a][g] && a != b {
                structure[b][a][g] = Expr::neg(e);
            }
        }

        let finsler = parse(&src.finsler, SlotContext::full(n, m))
            .map_err(|source| ModelError::Parse { field: "finsler".into(), source })?;

        let domain = match &src.z_box {
            Some(ranges) => Domain::from_ranges(n, ranges, src.u_annulus.unwrap_or([0.5, 1.5]))
                .map_err(|e| ModelError::Schema(e.into()))?,
            None => {
                let mut d = Domain::unit(n);
                if let Some(a) = src.u_annulus {
                    d.u_annulus = a;
                }
                d.check().map_err(|e| ModelError::Schema(e.into()))?;
                d
            }
        };
        Self::new(n, m, rho, structure, finsler, domain)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn layout(&self) -> SlotLayout {
        SlotLayout::new(self.n, self.m)
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn rho(&self, alpha: usize, k: usize) -> &Expr {
        &self.rho[alpha][k]
    }

    pub fn rho_exprs(&self) -> &[Vec<Expr>] {
        &self.rho
    }

    /// `∂_h ρ^k_α`.
    pub fn rho_derivative(&self, alpha: usize, k: usize, h: usize) -> &Expr {
        &self.rho_d[alpha][k][h]
    }

    /// `C^γ_{αβ}`.
    pub fn structure(&self, alpha: usize, beta: usize, gamma: usize) -> &Expr {
        &self.structure[alpha][beta][gamma]
    }

    pub fn structure_exprs(&self) -> &[Vec<Vec<Expr>>] {
        &self.structure
    }

    pub fn finsler(&self) -> &Expr {
        &self.finsler
    }

    /// Lazily memoized symbolic partials of `F` up to order four.
    pub fn finsler_derivatives(&self) -> &DerivativeCache {
        &self.f_derivs
    }

    fn base_point(z: &[Complex64]) -> Point {
        Point::new(z.to_vec(), Vec::new())
    }

    /// `ρ^k_α(z)` as `[α][k]`.
    pub fn rho_at(&self, z: &[Complex64]) -> Result<Matrix, EvalError> {
        let p = Self::base_point(z);
        self.rho.iter().map(|row| row.iter().map(|e| e.evaluate(&p)).collect()).collect()
    }

    /// `∂_h ρ^k_α(z)` as `[α][k][h]`.
    pub fn rho_derivatives_at(&self, z: &[Complex64]) -> Result<Vec<Matrix>, EvalError> {
        let p = Self::base_point(z);
        self.rho_d
            .iter()
            .map(|row| {
                row.iter().map(|ds| ds.iter().map(|e| e.evaluate(&p)).collect()).collect()
            })
            .collect()
    }

    /// `C^γ_{αβ}(z)` as `[α][β][γ]`.
    pub fn structure_at(&self, z: &[Complex64]) -> Result<Vec<Matrix>, EvalError> {
        let p = Self::base_point(z);
        self.structure
            .iter()
            .map(|a| a.iter().map(|b| b.iter().map(|e| e.evaluate(&p)).collect()).collect())
            .collect()
    }

    /// `Res^k_{αβ} = ρ^h_α ∂_h ρ^k_β − ρ^h_β ∂_h ρ^k_α − C^γ_{αβ} ρ^k_γ`,
    /// returned as `[k][α][β]`. It vanishes iff the anchor maps brackets to
    /// commutators at `z`.
    pub fn anchor_compatibility_residual(
        &self,
        z: &[Complex64],
    ) -> Result<Vec<Matrix>, EvalError> {
        let (n, m) = (self.n, self.m);
        let rho = self.rho_at(z)?;
        let drho = self.rho_derivatives_at(z)?;
        let c = self.structure_at(z)?;
        let mut out = vec![vec![vec![Complex64::new(0.0, 0.0); m]; m]; n];
        for k in 0..n {
            for a in 0..m {
                for b in 0..m {
                    let mut r = Complex64::new(0.0, 0.0);
                    for h in 0..n {
                        r += rho[a][h] * drho[b][k][h] - rho[b][h] * drho[a][k][h];
                    }
                    for g in 0..m {
                        r -= c[a][b][g] * rho[g][k];
                    }
                    out[k][a][b] = r;
                }
            }
        }
        Ok(out)
    }
}
