use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebroid::AlgebroidModel;
use crate::calculus::{Grad, Point, SlotLayout};
use crate::error::GeometryError;
use crate::exprlang::VarSlot;
use crate::finsler::{metric, MetricValue};
use crate::linalg::Matrix;
use crate::fmath::ComplexMath;

/// How much of the geometry to build at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Depth {
    /// `N` values only (third-order jets of `F` are never touched).
    NOnly,
    /// Values of `N`, `L`, `C`.
    Values,
    /// Values and full Wirtinger gradients of every tensor; needs
    /// fourth-order partials of `F`.
    Full,
}

pub type GradMatrix = Vec<Vec<Grad>>;

/// Every tensor of the Chern-Finsler connection at one point.
///
/// Layouts (0-based, upper index first):
/// `rho[α][k] = ρ^k_α`, `structure[α][β][γ] = 𝒞^γ_{αβ}`, `h[α][β] = h_{αβ̄}`,
/// `h_inv[β][α] = h^{β̄α}`, `n_base[β][k] = N^β_k`, `n[β][α] = N^β_α`,
/// `l_base[γ][α][k] = L^γ_{αk}`, `l[γ][α][β] = L^γ_{αβ}`,
/// `c[γ][α][β] = C^γ_{αβ}`.
///
/// With [`Depth::Full`] each entry carries its gradient over the `2(n+m)`
/// slots, so `δ_α`, `∂̇_α` and their conjugates of any tensor are available
/// without further differentiation.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub point: Point,
    pub layout: SlotLayout,
    pub depth: Depth,
    pub metric: MetricValue,
    pub rho: GradMatrix,
    pub structure: Vec<Matrix>,
    pub h: GradMatrix,
    pub h_inv: GradMatrix,
    pub n_base: GradMatrix,
    pub n: GradMatrix,
    pub l_base: Vec<GradMatrix>,
    pub l: Vec<GradMatrix>,
    pub c: Vec<GradMatrix>,
}

fn z(k: usize) -> VarSlot {
    VarSlot::z(k + 1)
}
fn u(a: usize) -> VarSlot {
    VarSlot::u(a + 1)
}
fn ub(a: usize) -> VarSlot {
    VarSlot::ubar(a + 1)
}

struct Partials<'a> {
    model: &'a AlgebroidModel,
    p: &'a Point,
    layout: SlotLayout,
}

impl Partials<'_> {
    /// `F_S` with (if asked) its gradient `F_{S+s}`.
    fn get(&self, slots: &[VarSlot], with_grad: bool) -> Result<Grad, GeometryError> {
        let d = self.model.finsler_derivatives();
        let value = d.value(slots, self.p)?;
        if !with_grad {
            return Ok(Grad::constant(value));
        }
        let mut buf = slots.to_vec();
        let mut grad = Vec::with_capacity(self.layout.len());
        for s in self.layout.slots() {
            buf.push(s);
            grad.push(d.value(&buf, self.p)?);
            buf.pop();
        }
        Ok(Grad::new(value, grad))
    }
}

/// `H⁻¹` with `d(H⁻¹) = −H⁻¹ (dH) H⁻¹` slot by slot.
fn inverse_grad(h: &GradMatrix, inv: &Matrix, len: usize) -> GradMatrix {
    let m = h.len();
    let mut out: GradMatrix = inv.iter().map(|r| r.iter().map(|&v| Grad::constant(v)).collect()).collect();
    if !h.iter().flatten().any(Grad::has_gradient) {
        return out;
    }
    for s in 0..len {
        for i in 0..m {
            for j in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..m {
                    for b in 0..m {
                        acc -= inv[i][a] * h[a][b].d(s) * inv[b][j];
                    }
                }
                if out[i][j].grad.is_empty() {
                    out[i][j].grad = vec![Complex64::new(0.0, 0.0); len];
                }
                out[i][j].grad[s] = acc;
            }
        }
    }
    out
}

impl PointGeometry {
    pub fn compute(model: &AlgebroidModel, p: &Point, depth: Depth) -> Result<Self, GeometryError> {
        let (n, m) = (model.n(), model.m());
        let layout = model.layout();
        let len = layout.len();
        let full = depth == Depth::Full;
        let metric = metric(model, p)?;
        let fp = Partials { model, p, layout };

        let rho_v = model.rho_at(&p.z)?;
        let rho: GradMatrix = if full {
            let d = model.rho_derivatives_at(&p.z)?;
            (0..m)
                .map(|a| {
                    (0..n)
                        .map(|k| {
                            let mut g = vec![Complex64::new(0.0, 0.0); len];
                            for h in 0..n {
                                g[layout.z(h)] = d[a][k][h];
                            }
                            Grad::new(rho_v[a][k], g)
                        })
                        .collect()
                })
                .collect()
        } else {
            rho_v.iter().map(|r| r.iter().map(|&v| Grad::constant(v)).collect()).collect()
        };
        let structure = model.structure_at(&p.z)?;

        // gradients of h and F_{zū} use third-order partials
        let grad2 = full;
        let h: GradMatrix = (0..m)
            .map(|a| (0..m).map(|b| fp.get(&[u(a), ub(b)], grad2)).collect())
            .collect::<Result<_, _>>()?;
        let h_inv = inverse_grad(&h, &metric.h_inv, len);

        let f_zub: GradMatrix = (0..n)
            .map(|k| (0..m).map(|s| fp.get(&[z(k), ub(s)], grad2)).collect())
            .collect::<Result<_, _>>()?;
        let n_base: GradMatrix = (0..m)
            .map(|b| (0..n).map(|k| Grad::sum(&(0..m).map(|s| &h_inv[s][b] * &f_zub[k][s]).collect::<Vec<_>>())).collect())
            .collect();
        let n_fib: GradMatrix = (0..m)
            .map(|b| (0..m).map(|a| Grad::sum(&(0..n).map(|k| &rho[a][k] * &n_base[b][k]).collect::<Vec<_>>())).collect())
            .collect();

        let mut geo = Self {
            point: p.clone(),
            layout,
            depth,
            metric,
            rho,
            structure,
            h,
            h_inv,
            n_base,
            n: n_fib,
            l_base: Vec::new(),
            l: Vec::new(),
            c: Vec::new(),
        };
        if depth == Depth::NOnly {
            return Ok(geo);
        }

        // ∂̇_β h_{ασ̄} and δ_k h_{ασ̄} = ∂_k h − N^β_k ∂̇_β h
        let dh_u: Vec<GradMatrix> = (0..m)
            .map(|b| {
                (0..m)
                    .map(|a| (0..m).map(|s| fp.get(&[u(a), ub(s), u(b)], full)).collect())
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, _>>()?;
        let mut delta_h: Vec<GradMatrix> = Vec::with_capacity(n);
        for k in 0..n {
            let mut mat = Vec::with_capacity(m);
            for a in 0..m {
                let mut row = Vec::with_capacity(m);
                for s in 0..m {
                    let mut g = fp.get(&[u(a), ub(s), z(k)], full)?;
                    for b in 0..m {
                        g = &g - &(&geo.n_base[b][k] * &dh_u[b][a][s]);
                    }
                    row.push(g);
                }
                mat.push(row);
            }
            delta_h.push(mat);
        }
        // δ_β h = ρ^k_β δ_k h
        let delta_h_fib: Vec<GradMatrix> = (0..m)
            .map(|b| {
                (0..m)
                    .map(|a| {
                        (0..m)
                            .map(|s| Grad::sum(&(0..n).map(|k| &geo.rho[b][k] * &delta_h[k][a][s]).collect::<Vec<_>>()))
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let contract = |g: usize, t: &GradMatrix, a: usize| -> Grad {
            Grad::sum(&(0..m).map(|s| &geo.h_inv[s][g] * &t[a][s]).collect::<Vec<_>>())
        };
        geo.l_base = (0..m)
            .map(|g| (0..m).map(|a| (0..n).map(|k| contract(g, &delta_h[k], a)).collect()).collect())
            .collect();
        geo.l = (0..m)
            .map(|g| (0..m).map(|a| (0..m).map(|b| contract(g, &delta_h_fib[b], a)).collect()).collect())
            .collect();
        geo.c = (0..m)
            .map(|g| (0..m).map(|a| (0..m).map(|b| contract(g, &dh_u[b], a)).collect()).collect())
            .collect();
        Ok(geo)
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    pub fn m(&self) -> usize {
        self.layout.m
    }

    /// Largest entry magnitude of `N`, `L`, `C` (the residual scale).
    pub fn scale(&self) -> f64 {
        let vals = self
            .n
            .iter()
            .flatten()
            .chain(self.l.iter().flatten().flatten())
            .chain(self.c.iter().flatten().flatten())
            .map(|g| g.value.modulus());
        vals.fold(crate::linalg::max_abs(&self.metric.h), f64::max)
    }

    /// Coefficients over the slots of `δ_α = ρ^k_α ∂_k − N^β_α ∂̇_β`.
    pub fn delta_field(&self, alpha: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.layout.len()];
        for k in 0..self.n() {
            v[self.layout.z(k)] = self.rho[alpha][k].value;
        }
        for b in 0..self.m() {
            v[self.layout.u(b)] = -self.n[b][alpha].value;
        }
        v
    }

    /// `δ_k = ∂_k − N^β_k ∂̇_β`.
    pub fn delta_base_field(&self, k: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.layout.len()];
        v[self.layout.z(k)] = Complex64::new(1.0, 0.0);
        for b in 0..self.m() {
            v[self.layout.u(b)] = -self.n_base[b][k].value;
        }
        v
    }

    /// Conjugate field: `conj` of the coefficients moved to the twin slots.
    pub fn conj_field(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..v.len()).map(|i| v[self.layout.conj_index(i)].conj()).collect()
    }

    /// `δ_α g` for a tensor entry carrying a gradient.
    pub fn delta(&self, alpha: usize, g: &Grad) -> Complex64 {
        g.along(&self.delta_field(alpha))
    }

    /// `δ_ᾱ g`.
    pub fn delta_bar(&self, alpha: usize, g: &Grad) -> Complex64 {
        g.along(&self.conj_field(&self.delta_field(alpha)))
    }

    /// `∂̇_α g`.
    pub fn vdot(&self, alpha: usize, g: &Grad) -> Complex64 {
        g.d(self.layout.u(alpha))
    }

    /// `∂̇_ᾱ g`.
    pub fn vdot_bar(&self, alpha: usize, g: &Grad) -> Complex64 {
        g.d(self.layout.ubar(alpha))
    }
}

/// Values of a [`GradMatrix`].
pub fn values(g: &GradMatrix) -> Matrix {
    g.iter().map(|r| r.iter().map(|x| x.value).collect()).collect()
}

/// Values of a rank-3 array of grads.
pub fn values3(g: &[GradMatrix]) -> Vec<Matrix> {
    g.iter().map(values).collect()
}
