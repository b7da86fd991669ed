use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use super::{AlgebroidModel, ModelError, ModelSource, Section};
use crate::calculus::PointSampler;
use crate::exprlang::{Expr, VarSlot};
use crate::fmath::ComplexMath;

/// Algebroid axioms checked at load time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invariant {
    Antisymmetry,
    Holomorphy,
    AnchorCompatibility,
    Jacobi,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Antisymmetry => "antisymmetry of the structure functions",
            Invariant::Holomorphy => "holomorphy of anchor and structure functions",
            Invariant::AnchorCompatibility => "anchor compatibility",
            Invariant::Jacobi => "Jacobi identity",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationOptions {
    pub points: usize,
    pub seed: u64,
    pub antisymmetry_tol: f64,
    pub anchor_tol: f64,
    pub jacobi_tol: f64,
    /// Report a Jacobi failure as a warning instead of rejecting the model.
    pub jacobi_as_warning: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            points: 20,
            seed: 42,
            antisymmetry_tol: 1e-12,
            anchor_tol: 1e-9,
            jacobi_tol: 1e-8,
            jacobi_as_warning: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub max_antisymmetry: f64,
    pub max_anchor: f64,
    pub max_jacobi: f64,
    pub warnings: Vec<String>,
}

struct Worst {
    value: f64,
    witness: Vec<Complex64>,
    detail: String,
}

impl Worst {
    fn new() -> Self {
        Self { value: 0.0, witness: Vec::new(), detail: String::new() }
    }

    fn update(&mut self, value: f64, z: &[Complex64]) -> bool {
        if self.witness.is_empty() || value > self.value {
            self.value = value;
            self.witness = z.to_vec();
            true
        } else {
            false
        }
    }
}

fn normalized(r: f64, scale: f64) -> f64 {
    r / (1.0 + scale)
}

impl AlgebroidModel {
    /// Parse and validate in one go.
    pub fn load(src: &ModelSource, opts: &ValidationOptions) -> Result<(Self, ValidationReport), ModelError> {
        let model = Self::from_source(src)?;
        let report = model.validate(opts)?;
        Ok((model, report))
    }

    /// Checks holomorphy, antisymmetry, anchor compatibility and the Jacobi
    /// identity of the frame brackets at seeded base points.
    pub fn validate(&self, opts: &ValidationOptions) -> Result<ValidationReport, ModelError> {
        let (n, m) = (self.n(), self.m());
        let holomorphic = self
            .rho_exprs()
            .iter()
            .flatten()
            .chain(self.structure_exprs().iter().flatten().flatten())
            .all(|e| (1..=n).all(|k| e.differentiate(VarSlot::zbar(k)).is_zero()));
        if !holomorphic {
            return Err(ModelError::Validation {
                invariant: Invariant::Holomorphy,
                witness: Vec::new(),
                residual: f64::NAN,
                detail: "a z̄-derivative does not vanish".into(),
            });
        }

        let jacobi = self.jacobi_sections();
        let mut sampler = PointSampler::new(self.domain().clone(), n, m, opts.seed);
        let mut anti = Worst::new();
        let mut anchor = Worst::new();
        let mut jac = Worst::new();
        for _ in 0..opts.points {
            let z = sampler.base_point();
            let eval_err = |field: &str| {
                let field = String::from(field);
                let witness = z.clone();
                move |source| ModelError::Eval { field, witness, source }
            };
            let c = self.structure_at(&z).map_err(eval_err("structure functions"))?;
            let scale = c.iter().flatten().flatten().map(|v| v.modulus()).fold(0.0, f64::max);
            let mut r: f64 = 0.0;
            for a in 0..m {
                for b in 0..m {
                    for g in 0..m {
                        r = r.max((c[a][b][g] + c[b][a][g]).modulus());
                    }
                }
            }
            anti.update(normalized(r, scale), &z);

            let res = self.anchor_compatibility_residual(&z).map_err(eval_err("anchor"))?;
            let rho = self.rho_at(&z).map_err(eval_err("anchor"))?;
            let rscale = rho.iter().flatten().map(|v| v.modulus()).fold(scale, f64::max);
            let mut entry = (0, 0, 0, Complex64::new(0.0, 0.0));
            for (k, rk) in res.iter().enumerate() {
                for (a, ra) in rk.iter().enumerate() {
                    for (b, v) in ra.iter().enumerate() {
                        if v.modulus() > entry.3.modulus() {
                            entry = (k, a, b, *v);
                        }
                    }
                }
            }
            if anchor.update(normalized(entry.3.modulus(), rscale * rscale), &z) {
                let (k, a, b, v) = entry;
                anchor.detail = format!("Res^{}_{}{} = {}{:+}i", k + 1, a + 1, b + 1, v.re, v.im);
            }

            let mut r: f64 = 0.0;
            for s in &jacobi {
                let v = s.evaluate(&z).map_err(eval_err("Jacobi sum"))?;
                r = v.iter().map(|x| x.modulus()).fold(r, f64::max);
            }
            jac.update(normalized(r, scale * scale), &z);
        }

        let fail = |invariant, w: Worst| ModelError::Validation {
            invariant,
            witness: w.witness,
            residual: w.value,
            detail: w.detail,
        };
        let mut report = ValidationReport {
            max_antisymmetry: anti.value,
            max_anchor: anchor.value,
            max_jacobi: jac.value,
            warnings: Vec::new(),
        };
        if !(anti.value <= opts.antisymmetry_tol) {
            return Err(fail(Invariant::Antisymmetry, anti));
        }
        if !(anchor.value <= opts.anchor_tol) {
            return Err(fail(Invariant::AnchorCompatibility, anchor));
        }
        if !(jac.value <= opts.jacobi_tol) {
            if opts.jacobi_as_warning {
                report.warnings.push(format!(
                    "Jacobi identity fails (residual {:e}); continuing as requested",
                    jac.value
                ));
            } else {
                return Err(fail(Invariant::Jacobi, jac));
            }
        }
        Ok(report)
    }

    /// Cyclic sums `[[e_α,e_β],e_γ] + [[e_β,e_γ],e_α] + [[e_γ,e_α],e_β]` for
    /// `α < β < γ` (the sum is alternating, so these cover every triple).
    pub fn jacobi_sections(&self) -> Vec<Section> {
        let m = self.m();
        let e = |a| Section::basis(m, a);
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                for g in b + 1..m {
                    let t1 = self.bracket_sections(&self.bracket_sections(&e(a), &e(b)), &e(g));
                    let t2 = self.bracket_sections(&self.bracket_sections(&e(b), &e(g)), &e(a));
                    let t3 = self.bracket_sections(&self.bracket_sections(&e(g), &e(a)), &e(b));
                    let coeffs = (0..m)
                        .map(|d| {
                            Expr::add(
                                Expr::add(t1.coeffs[d].clone(), t2.coeffs[d].clone()),
                                t3.coeffs[d].clone(),
                            )
                        })
                        .collect();
                    out.push(Section::new(coeffs));
                }
            }
        }
        out
    }
}
