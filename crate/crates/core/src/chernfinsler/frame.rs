use alloc::vec::Vec;

use num_complex::Complex64;

use super::{Depth, PointGeometry};
use crate::algebroid::{AlgebroidModel, ModelError};
use crate::calculus::Point;
use crate::error::GeometryError;
use crate::exprlang::{Expr, VarSlot};
use crate::linalg::{self, expr_inverse, Matrix};
use crate::verify::Residual;
use crate::fmath::ComplexMath;

/// Below this `|det M|` a frame change is rejected.
pub const SINGULAR_FRAME: f64 = 1e-10;

/// A holomorphic change of fiber frame `ũ = M(z) u`, `ẽ_α = W^β_α e_β` with
/// `W = M⁻¹`, keeping the base chart fixed.
///
/// `M[γ][β] = M^γ_β` (upper index first), likewise for `W`.
pub struct FrameChange {
    m: Vec<Vec<Expr>>,
    dm: Vec<Vec<Vec<Expr>>>,
    transformed: AlgebroidModel,
}

/// `exp(z1)·I` plus `z1` on every entry above the diagonal.
pub fn default_frame_change(m: usize) -> Vec<Vec<Expr>> {
    let z1 = Expr::var(VarSlot::z(1));
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| match i.cmp(&j) {
                    core::cmp::Ordering::Equal => Expr::exp(z1.clone()),
                    core::cmp::Ordering::Less => z1.clone(),
                    core::cmp::Ordering::Greater => Expr::zero(),
                })
                .collect()
        })
        .collect()
}

fn eval_matrix(a: &[Vec<Expr>], p: &Point) -> Result<Matrix, GeometryError> {
    Ok(a.iter().map(|r| r.iter().map(|e| e.evaluate(p)).collect::<Result<Vec<_>, _>>()).collect::<Result<_, _>>()?)
}

impl FrameChange {
    /// Builds the model written in the new frame:
    /// `ρ̃^k_α = W^θ_α ρ^k_θ`, `F̃(z, ũ) = F(z, W ũ)` and
    /// `𝒞̃^τ_{αβ} = M^τ_γ [W^θ_α W^σ_β 𝒞^γ_{θσ} + ρ̃^k_α ∂_k W^γ_β − ρ̃^k_β ∂_k W^γ_α]`.
    pub fn new(model: &AlgebroidModel, m_exprs: Vec<Vec<Expr>>) -> Result<Self, ModelError> {
        let (n, m) = (model.n(), model.m());
        if m_exprs.len() != m || m_exprs.iter().any(|r| r.len() != m) {
            return Err(ModelError::Schema(alloc::format!("frame change must be {m}x{m}")));
        }
        let m_exprs: Vec<Vec<Expr>> = m_exprs.iter().map(|r| r.iter().map(Expr::normalize).collect()).collect();
        let w = expr_inverse(&m_exprs);
        let dz = |e: &Expr, k: usize| e.differentiate(VarSlot::z(k + 1));

        let rho: Vec<Vec<Expr>> = (0..m)
            .map(|a| {
                (0..n)
                    .map(|k| Expr::sum((0..m).map(|t| Expr::mul(w[t][a].clone(), model.rho(t, k).clone()))))
                    .collect()
            })
            .collect();

        let mut structure = alloc::vec![alloc::vec![alloc::vec![Expr::zero(); m]; m]; m];
        for a in 0..m {
            for b in 0..m {
                // bracket [ẽ_α, ẽ_β] in the old frame, coefficient γ
                let old: Vec<Expr> = (0..m)
                    .map(|g| {
                        let mut terms = Vec::new();
                        for t in 0..m {
                            for s in 0..m {
                                let c = model.structure(t, s, g);
                                if !c.is_zero() {
                                    terms.push(Expr::mul(Expr::mul(w[t][a].clone(), w[s][b].clone()), c.clone()));
                                }
                            }
                        }
                        for k in 0..n {
                            terms.push(Expr::mul(rho[a][k].clone(), dz(&w[g][b], k)));
                            terms.push(Expr::neg(Expr::mul(rho[b][k].clone(), dz(&w[g][a], k))));
                        }
                        Expr::sum(terms)
                    })
                    .collect();
                for t in 0..m {
                    structure[a][b][t] =
                        Expr::sum((0..m).map(|g| Expr::mul(m_exprs[t][g].clone(), old[g].clone())));
                }
            }
        }

        let finsler = model.finsler().substitute(&|s: VarSlot| {
            let b = s.index - 1;
            match s.kind {
                crate::exprlang::SlotKind::U => {
                    Some(Expr::sum((0..m).map(|a| Expr::mul(w[b][a].clone(), Expr::var(VarSlot::u(a + 1))))))
                }
                crate::exprlang::SlotKind::UBar => Some(Expr::sum(
                    (0..m).map(|a| Expr::mul(w[b][a].conjugate(), Expr::var(VarSlot::ubar(a + 1)))),
                )),
                _ => None,
            }
        });

        let transformed = AlgebroidModel::new(n, m, rho, structure, finsler, model.domain().clone())?;
        let dm = (0..n)
            .map(|k| m_exprs.iter().map(|r| r.iter().map(|e| dz(e, k)).collect()).collect())
            .collect();
        Ok(Self { m: m_exprs, dm, transformed })
    }

    pub fn transformed(&self) -> &AlgebroidModel {
        &self.transformed
    }

    /// `M(z)` and `ũ = M u`, failing on a singular frame.
    pub fn transform_point(&self, p: &Point) -> Result<(Matrix, Point), GeometryError> {
        let base = Point::new(p.z.clone(), Vec::new());
        let mv = eval_matrix(&self.m, &base)?;
        let det = linalg::determinant(&mv);
        if !(det.modulus() >= SINGULAR_FRAME) {
            return Err(GeometryError::SingularFrame { det: det.modulus() });
        }
        let ut = linalg::mat_vec(&mv, &p.u);
        Ok((mv, Point::new(p.z.clone(), ut)))
    }

    /// Residuals of the transformation laws at `p`, comparing the geometry
    /// of the original model at `(z, u)` with that of the transformed model
    /// at `(z, M u)`:
    ///
    /// * `M^β_α Ñ^γ_β = M^γ_β N^β_α − ρ^k_α (∂_k M^γ_β) u^β`,
    /// * `L̃^τ_{αβ} = M^τ_γ W^σ_β [ρ^k_σ ∂_k W^γ_α + W^θ_α L^γ_{θσ}]`,
    /// * `C̃^τ_{αβ} = M^τ_γ W^σ_β W^θ_α C^γ_{θσ}`,
    /// * `X̃_α = W^β_α X_β`, compared through `ρ_T` as coordinate fields.
    ///
    /// `W` and `∂_k W = −W (∂_k M) W` are numeric here.
    pub fn check(&self, model: &AlgebroidModel, p: &Point) -> Result<Vec<Residual>, GeometryError> {
        let (n, m) = (model.n(), model.m());
        let (mv, pt) = self.transform_point(p)?;
        let w = linalg::inverse(&mv).ok_or(GeometryError::SingularFrame { det: 0.0 })?;
        let base = Point::new(p.z.clone(), Vec::new());
        let dw: Vec<Matrix> = self
            .dm
            .iter()
            .map(|d| {
                let dmv = eval_matrix(d, &base)?;
                let t = linalg::mat_mul(&linalg::mat_mul(&w, &dmv), &w);
                Ok(t.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect())
            })
            .collect::<Result<_, GeometryError>>()?;
        let dmv: Vec<Matrix> = self.dm.iter().map(|d| eval_matrix(d, &base)).collect::<Result<_, _>>()?;

        let g = PointGeometry::compute(model, p, Depth::Values)?;
        let gt = PointGeometry::compute(&self.transformed, &pt, Depth::Values)?;
        let zero = Complex64::new(0.0, 0.0);
        let rho = |a: usize, k: usize| g.rho[a][k].value;
        let u = &p.u;

        let mut law_n = Residual::new("N.rule");
        for a in 0..m {
            for c in 0..m {
                let lhs: Complex64 = (0..m).map(|b| mv[b][a] * gt.n[c][b].value).sum();
                let mut rhs: Complex64 = (0..m).map(|b| mv[c][b] * g.n[b][a].value).sum();
                for k in 0..n {
                    let du: Complex64 = (0..m).map(|b| dmv[k][c][b] * u[b]).sum();
                    rhs -= rho(a, k) * du;
                }
                law_n.pair(lhs, rhs);
            }
        }

        let mut law_l = Residual::new("L.rule");
        let mut law_c = Residual::new("C.rule");
        for t in 0..m {
            for a in 0..m {
                for b in 0..m {
                    let (mut l_rhs, mut c_rhs) = (zero, zero);
                    for c in 0..m {
                        for s in 0..m {
                            let mut inner: Complex64 = (0..n).map(|k| rho(s, k) * dw[k][c][a]).sum();
                            for th in 0..m {
                                inner += w[th][a] * g.l[c][th][s].value;
                                c_rhs += mv[t][c] * w[s][b] * w[th][a] * g.c[c][th][s].value;
                            }
                            l_rhs += mv[t][c] * w[s][b] * inner;
                        }
                    }
                    law_l.pair(gt.l[t][a][b].value, l_rhs);
                    law_c.pair(gt.c[t][a][b].value, c_rhs);
                }
            }
        }

        let mut cov = Residual::new("frame.covariance");
        for a in 0..m {
            for k in 0..n {
                let rhs: Complex64 = (0..m).map(|b| w[b][a] * rho(b, k)).sum();
                cov.pair(gt.rho[a][k].value, rhs);
            }
            for mu in 0..m {
                let mut lhs = zero;
                for k in 0..n {
                    let dwu: Complex64 = (0..m).map(|b| dw[k][mu][b] * pt.u[b]).sum();
                    lhs += gt.rho[a][k].value * dwu;
                }
                for c in 0..m {
                    lhs -= gt.n[c][a].value * w[mu][c];
                }
                let rhs: Complex64 = (0..m).map(|b| -w[b][a] * g.n[mu][b].value).sum();
                cov.pair(lhs, rhs);
            }
        }
        Ok(alloc::vec![law_n, law_l, law_c, cov])
    }
}

/// One-shot form of [`FrameChange::check`].
pub fn frame_change_check(
    model: &AlgebroidModel,
    p: &Point,
    m_exprs: Vec<Vec<Expr>>,
) -> Result<Vec<Residual>, GeometryError> {
    let fc = FrameChange::new(model, m_exprs).map_err(|e| GeometryError::InvalidFrame(alloc::format!("{e}")))?;
    fc.check(model, p)
}
