//! The Chern-Finsler nonlinear connection `N = h⁻¹ ∂∂̄F` and the linear
//! connection coefficients `L^γ_{αβ} = h^{σ̄γ} δ_β h_{ασ̄}`,
//! `C^γ_{αβ} = h^{σ̄γ} ∂̇_β h_{ασ̄}`, together with their transformation laws
//! under a change of fiber frame.

mod frame;
mod geometry;

use alloc::vec::Vec;

use num_complex::Complex64;

pub use frame::{default_frame_change, frame_change_check, FrameChange};
pub use geometry::{values, values3, Depth, GradMatrix, PointGeometry};

use crate::algebroid::AlgebroidModel;
use crate::calculus::Point;
use crate::error::GeometryError;
use crate::exprlang::{Expr, VarSlot};
use crate::linalg::Matrix;
use crate::verify::Residual;

/// Connection coefficients at a point (values only).
///
/// `n_base[β][k] = N^β_k`, `n[β][α] = N^β_α`, `l[γ][α][β] = L^γ_{αβ}`,
/// `l_base[γ][α][k] = L^γ_{αk}`, `c[γ][α][β] = C^γ_{αβ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionData {
    pub n_base: Matrix,
    pub n: Matrix,
    pub l: Vec<Matrix>,
    pub l_base: Vec<Matrix>,
    pub c: Vec<Matrix>,
}

impl ConnectionData {
    pub fn from_geometry(g: &PointGeometry) -> Self {
        Self {
            n_base: values(&g.n_base),
            n: values(&g.n),
            l: values3(&g.l),
            l_base: values3(&g.l_base),
            c: values3(&g.c),
        }
    }

    /// `N^β_α`.
    pub fn n_coef(&self, beta: usize, alpha: usize) -> Complex64 {
        self.n[beta][alpha]
    }

    /// `L^γ_{αβ}`.
    pub fn l_coef(&self, gamma: usize, alpha: usize, beta: usize) -> Complex64 {
        self.l[gamma][alpha][beta]
    }

    /// `C^γ_{αβ}`.
    pub fn c_coef(&self, gamma: usize, alpha: usize, beta: usize) -> Complex64 {
        self.c[gamma][alpha][beta]
    }
}

/// `(N^β_k, N^β_α)`.
pub fn nonlinear_connection(model: &AlgebroidModel, p: &Point) -> Result<(Matrix, Matrix), GeometryError> {
    let g = PointGeometry::compute(model, p, Depth::NOnly)?;
    Ok((values(&g.n_base), values(&g.n)))
}

pub fn linear_connection(model: &AlgebroidModel, p: &Point) -> Result<ConnectionData, GeometryError> {
    let g = PointGeometry::compute(model, p, Depth::Values)?;
    Ok(ConnectionData::from_geometry(&g))
}

/// Which adapted derivative [`delta_apply`] takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaIndex {
    /// `δ_k = ∂_k − N^β_k ∂̇_β` (0-based `k`).
    Base(usize),
    /// `δ_α = ρ^k_α δ_k` (0-based `α`).
    Fiber(usize),
}

/// `δf` (or `δ̄f` when `barred`) at `p`, from exact partials of `f`.
pub fn delta_apply(
    model: &AlgebroidModel,
    p: &Point,
    f: &Expr,
    index: DeltaIndex,
    barred: bool,
) -> Result<Complex64, GeometryError> {
    let g = PointGeometry::compute(model, p, Depth::NOnly)?;
    let field = match index {
        DeltaIndex::Base(k) => g.delta_base_field(k),
        DeltaIndex::Fiber(a) => g.delta_field(a),
    };
    let field = if barred { g.conj_field(&field) } else { field };
    let layout = model.layout();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, c) in field.iter().enumerate() {
        if *c != Complex64::new(0.0, 0.0) {
            acc += c * f.differentiate(layout.slot(i)).evaluate(p)?;
        }
    }
    Ok(acc)
}

/// Residuals of the identities tying `N`, `L`, `C` together:
///
/// * `N^β_α = ρ^k_α N^β_k` against `N^β_α = h^{σ̄β} ρ^k_α ∂_k ∂̇_σ̄ F`,
/// * `L^γ_{αβ} = ρ^k_β L^γ_{αk}`,
/// * `L^γ_{αk} = ∂̇_α N^γ_k` and `L^γ_{αβ} = ∂̇_α N^γ_β`,
/// * `C^γ_{αβ} = C^γ_{βα}`,
/// * `h h⁻¹ = I` and `N(z, λu) = λ N(z, u)` for `λ ∈ {2, i}`.
///
/// Needs a [`Depth::Full`] geometry.
pub fn connection_identity_residuals(
    model: &AlgebroidModel,
    g: &PointGeometry,
) -> Result<Vec<Residual>, GeometryError> {
    let (n, m) = (g.n(), g.m());
    let p = &g.point;
    let mut coef_n = Residual::new("rel.coef.N");
    for b in 0..m {
        for a in 0..m {
            let mut direct = Complex64::new(0.0, 0.0);
            for s in 0..m {
                let mut inner = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    inner += g.rho[a][k].value
                        * model.finsler_partial(&[VarSlot::z(k + 1), VarSlot::ubar(s + 1)], p)?;
                }
                direct += g.h_inv[s][b].value * inner;
            }
            coef_n.pair(g.n[b][a].value, direct);
        }
    }

    let mut rel_l = Residual::new("rel.L");
    let mut rel_ln = Residual::new("rel.L,N");
    let mut l_n = Residual::new("L,N");
    let mut sym_c = Residual::new("C.symmetry");
    for c in 0..m {
        for a in 0..m {
            for b in 0..m {
                let via_base: Complex64 = (0..n).map(|k| g.rho[b][k].value * g.l_base[c][a][k].value).sum();
                rel_l.pair(g.l[c][a][b].value, via_base);
                l_n.pair(g.l[c][a][b].value, g.vdot(a, &g.n[c][b]));
                sym_c.pair(g.c[c][a][b].value, g.c[c][b][a].value);
            }
            for k in 0..n {
                rel_ln.pair(g.l_base[c][a][k].value, g.vdot(a, &g.n_base[c][k]));
            }
        }
    }

    let mut inverse = Residual::new("metric.inverse");
    let prod = crate::linalg::mat_mul(&g.metric.h, &g.metric.h_inv);
    for (i, row) in prod.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let e = if i == j { 1.0 } else { 0.0 };
            inverse.pair(*v, Complex64::new(e, 0.0));
        }
    }

    let mut homog = Residual::new("N.homogeneity");
    for lambda in [Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0)] {
        let scaled = PointGeometry::compute(model, &p.scale_fiber(lambda), Depth::NOnly)?;
        for b in 0..m {
            for a in 0..m {
                homog.pair(scaled.n[b][a].value, g.n[b][a].value * lambda);
            }
        }
    }
    Ok(alloc::vec![coef_n, rel_l, rel_ln, l_n, sym_c, inverse, homog])
}
