use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::frame::{apply, coordinate_field, FrameVector};
use super::torsion::ConnectionTable;
use crate::calculus::{directional_oracle, wirtinger_to_real};
use crate::chernfinsler::PointGeometry;
use crate::error::GeometryError;
use crate::exprlang::Expr;
use crate::linalg::Matrix;
use crate::verify::Residual;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `X G(Y, Z̄) − G(D_X Y, Z̄) − G(Y, D_X Z̄)` with `G(V_β, V_γ̄) = h_{βγ̄}`
/// on the vertical pair and `G(X_β, X_γ̄) = h_{βγ̄}` on the horizontal
/// one, for every frame vector `X`. Needs a `Full` geometry.
pub fn metric_compatibility_residual(g: &PointGeometry, conn: &ConnectionTable) -> Vec<Residual> {
    let m = g.m();
    let mut vertical = Residual::new("compat.vertical");
    let mut horizontal = Residual::new("compat.horizontal");
    for x in FrameVector::all(m) {
        for b in 0..m {
            for c in 0..m {
                let lhs = apply(g, x, &g.h[b][c]);
                for (res, y, z) in [
                    (&mut vertical, FrameVector::v(b), FrameVector::vbar(c)),
                    (&mut horizontal, FrameVector::x(b), FrameVector::xbar(c)),
                ] {
                    let dy = conn.get(x, y);
                    let dz = conn.get(x, z);
                    let mut rhs = ZERO;
                    for a in 0..m {
                        rhs += dy[FrameVector::new(y.kind, a).position(m)].value * g.h[a][c].value;
                        rhs += dz[FrameVector::new(z.kind, a).position(m)].value * g.h[b][a].value;
                    }
                    res.pair(lhs, rhs);
                }
            }
        }
    }
    vec![vertical, horizontal]
}

/// `K[σ][α][γ] = L^σ_{αγ} − L^σ_{γα}`; zero iff the model is Kähler at the
/// point.
pub fn kahler_residual(g: &PointGeometry) -> Vec<Matrix> {
    let m = g.m();
    (0..m)
        .map(|s| (0..m).map(|a| (0..m).map(|c| g.l[s][a][c].value - g.l[s][c][a].value).collect()).collect())
        .collect()
}

/// Semispray data on the basis `(Z_1..Z_m, V_1..V_m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SprayCheck {
    /// `G^α` (the default `½ N^α_β u^β` when none is supplied).
    pub g: Vec<Complex64>,
    pub default_spray: bool,
    /// `S = u^α Z_α − 2 G^α V_α`.
    pub spray: Vec<Complex64>,
    /// `T(S)` under `T(Z_α) = V_α`, `T(V_α) = 0`.
    pub t_spray: Vec<Complex64>,
    /// Liouville field `u^α V_α`.
    pub liouville: Vec<Complex64>,
    /// `2 G^α − N^α_β u^β`.
    pub consistency: Vec<Complex64>,
}

impl SprayCheck {
    pub fn residuals(&self) -> Vec<Residual> {
        let mut ts = Residual::new("spray.T(S)=L");
        for (a, b) in self.t_spray.iter().zip(&self.liouville) {
            ts.pair(*a, *b);
        }
        let mut cons = Residual::new("spray.consistency");
        for c in &self.consistency {
            cons.zero(*c, 0.0);
        }
        vec![ts, cons]
    }
}

/// The tangent structure applied to a vector on `(Z, V)`: `Z_α ↦ V_α`.
fn tangent_structure(v: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; 2 * m];
    out[m..].copy_from_slice(&v[..m]);
    out
}

pub fn spray_check(g: &PointGeometry, spray: Option<&[Expr]>) -> Result<SprayCheck, GeometryError> {
    let m = g.m();
    let u = &g.point.u;
    let nu: Vec<Complex64> = (0..m).map(|a| (0..m).map(|b| g.n[a][b].value * u[b]).sum()).collect();
    let (gv, default_spray) = match spray {
        Some(exprs) => (exprs.iter().map(|e| e.evaluate(&g.point)).collect::<Result<Vec<_>, _>>()?, false),
        None => (nu.iter().map(|x| x * 0.5).collect(), true),
    };
    let mut s = vec![ZERO; 2 * m];
    for a in 0..m {
        s[a] = u[a];
        s[m + a] = -2.0 * gv[a];
    }
    let mut liouville = vec![ZERO; 2 * m];
    liouville[m..].copy_from_slice(u);
    let consistency = (0..m).map(|a| 2.0 * gv[a] - nu[a]).collect();
    Ok(SprayCheck { t_spray: tangent_structure(&s, m), g: gv, default_spray, spray: s, liouville, consistency })
}

/// `df = ∂^h f + ∂^v f + ∂̄^h f + ∂̄^v f` as coefficient vectors on the dual
/// frame: `(δ_α f, ∂̇_α f, δ_ᾱ f, ∂̇_ᾱ f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub horizontal: Vec<Complex64>,
    pub vertical: Vec<Complex64>,
    pub horizontal_bar: Vec<Complex64>,
    pub vertical_bar: Vec<Complex64>,
}

impl Decomposition {
    /// The coefficient dual to a frame vector, i.e. `df(A)`.
    pub fn pairing(&self, a: FrameVector) -> Complex64 {
        use super::frame::FrameKind::*;
        let part = match a.kind {
            X => &self.horizontal,
            V => &self.vertical,
            XBar => &self.horizontal_bar,
            VBar => &self.vertical_bar,
        };
        part[a.index]
    }
}

pub fn differential_decomposition(g: &PointGeometry, f: &Expr) -> Result<Decomposition, GeometryError> {
    let layout = g.layout;
    let grad: Vec<Complex64> =
        layout.slots().into_iter().map(|s| f.differentiate(s).evaluate(&g.point)).collect::<Result<_, _>>()?;
    let df = |a: FrameVector| -> Complex64 { coordinate_field(g, a).iter().zip(&grad).map(|(x, y)| x * y).sum() };
    let m = g.m();
    let part = |k: fn(usize) -> FrameVector| (0..m).map(|i| df(k(i))).collect();
    Ok(Decomposition {
        horizontal: part(FrameVector::x),
        vertical: part(FrameVector::v),
        horizontal_bar: part(FrameVector::xbar),
        vertical_bar: part(FrameVector::vbar),
    })
}

/// Each coefficient of the decomposition against the finite-difference
/// derivative of `f` along the matching frame direction.
pub fn decomposition_residual(g: &PointGeometry, f: &Expr, dec: &Decomposition) -> Result<Residual, GeometryError> {
    let mut r = Residual::new("decomposition.fd");
    for a in FrameVector::all(g.m()) {
        let real = wirtinger_to_real(g.layout, &coordinate_field(g, a));
        let fd = directional_oracle(f, &g.point, &real)?;
        r.pair(dec.pairing(a), fd);
    }
    Ok(r)
}
