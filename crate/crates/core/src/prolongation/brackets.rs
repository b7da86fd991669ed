use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::frame::{conj_coeffs, coordinate_field, FrameKind, FrameVector};
use crate::algebroid::AlgebroidModel;
use crate::calculus::{wirtinger_to_real, Point, FD_STEP};
use crate::chernfinsler::{Depth, PointGeometry};
use crate::error::GeometryError;
use crate::linalg::{self, Matrix};
use crate::fmath::ComplexMath;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `[A, B]_T` for every pair of adapted frame vectors at a point, as frame
/// coefficient vectors of length `4m` (see [`FrameVector::position`]).
///
/// Only the pairs `(X_α, X_β)` with `α < β`, `(X_α, X_β̄)`, `(X_α, V_β)` and
/// `(X_α, V_β̄)` are evaluated; every other entry follows by antisymmetry
/// and conjugation, so both hold exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTable {
    m: usize,
    entries: Vec<Vec<Complex64>>,
    /// `r[γ][α][β] = R^γ_{αβ} = 𝒞^ε_{αβ} N^γ_ε − δ_α N^γ_β + δ_β N^γ_α`.
    pub r: Vec<Matrix>,
    /// `mixed[α][β][γ] = δ_β̄ N^γ_α`, the `V_γ` part of `[X_α, X_β̄]`.
    pub mixed: Vec<Matrix>,
    /// `vdot[α][β][γ] = ∂̇_β N^γ_α`.
    pub vdot: Vec<Matrix>,
    /// `vdot_bar[α][β][γ] = ∂̇_β̄ N^γ_α`.
    pub vdot_bar: Vec<Matrix>,
}

impl BracketTable {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, a: FrameVector, b: FrameVector) -> &[Complex64] {
        &self.entries[a.position(self.m) * 4 * self.m + b.position(self.m)]
    }

    /// `R^σ_{αβ̄}`, the `V_σ` coefficient of `[X_α, X_β̄]`.
    pub fn r_mixed(&self, sigma: usize, alpha: usize, beta: usize) -> Complex64 {
        self.mixed[alpha][beta][sigma]
    }

    /// `R^σ_{ᾱβ}`, the `V_σ` coefficient of `[X_ᾱ, X_β]`.
    pub fn r_mixed_conj(&self, sigma: usize, alpha: usize, beta: usize) -> Complex64 {
        -self.mixed[beta][alpha][sigma]
    }
}

fn put(v: &mut [Complex64], f: FrameVector, m: usize, c: Complex64) {
    v[f.position(m)] = c;
}

fn neg(v: &[Complex64]) -> Vec<Complex64> {
    v.iter().map(|c| -c).collect()
}

/// Fills a pair table from the evaluated `(unbarred, *)` generators. The
/// rule set is shared with the torsion table, which has the same symmetries.
pub(crate) fn fill_antisymmetric(
    m: usize,
    mut primary: impl FnMut(FrameVector, FrameVector) -> Vec<Complex64>,
) -> Vec<Vec<Complex64>> {
    let d = 4 * m;
    let mut entries: Vec<Option<Vec<Complex64>>> = vec![None; d * d];
    let idx = |a: FrameVector, b: FrameVector| a.position(m) * d + b.position(m);
    use FrameKind::*;
    for a in 0..m {
        for b in 0..m {
            let xa = FrameVector::x(a);
            if a < b {
                entries[idx(xa, FrameVector::x(b))] = Some(primary(xa, FrameVector::x(b)));
            } else if a == b {
                entries[idx(xa, xa)] = Some(vec![ZERO; d]);
            }
            for kb in [XBar, V, VBar] {
                let fb = FrameVector::new(kb, b);
                entries[idx(xa, fb)] = Some(primary(xa, fb));
            }
            if a <= b {
                let (va, vb) = (FrameVector::v(a), FrameVector::v(b));
                entries[idx(va, vb)] = Some(primary(va, vb));
            }
            let (va, vbb) = (FrameVector::v(a), FrameVector::vbar(b));
            entries[idx(va, vbb)] = Some(primary(va, vbb));
        }
    }
    let get = |e: &Vec<Option<Vec<Complex64>>>, a: FrameVector, b: FrameVector| e[idx(a, b)].clone();
    for a in 0..m {
        for b in 0..m {
            if a > b {
                let v = neg(&get(&entries, FrameVector::x(b), FrameVector::x(a)).unwrap());
                entries[idx(FrameVector::x(a), FrameVector::x(b))] = Some(v);
                let v = neg(&get(&entries, FrameVector::v(b), FrameVector::v(a)).unwrap());
                entries[idx(FrameVector::v(a), FrameVector::v(b))] = Some(v);
            }
        }
    }
    for a in 0..m {
        for b in 0..m {
            let va = FrameVector::v(a);
            // [V_α, X_β] = −[X_β, V_α]
            let v = neg(&get(&entries, FrameVector::x(b), va).unwrap());
            entries[idx(va, FrameVector::x(b))] = Some(v);
            // [V_α, X_β̄] = −conj [X_β, V_ᾱ]
            let v = neg(&conj_coeffs(&get(&entries, FrameVector::x(b), FrameVector::vbar(a)).unwrap(), m));
            entries[idx(va, FrameVector::xbar(b))] = Some(v);
        }
    }
    // [Ā, B] = conj [A, B̄]
    for a in FrameVector::all(m).into_iter().filter(|f| f.kind.is_barred()) {
        for b in FrameVector::all(m) {
            let v = conj_coeffs(&get(&entries, a.conj(), b.conj()).unwrap(), m);
            entries[idx(a, b)] = Some(v);
        }
    }
    entries.into_iter().map(|e| e.expect("every pair is derived")).collect()
}

/// Closed-form brackets of the adapted frame:
///
/// * `[X_α, X_β] = 𝒞^γ_{αβ} X_γ + R^γ_{αβ} V_γ`,
/// * `[X_α, X_β̄] = (δ_β̄ N^γ_α) V_γ − (δ_α N̄^γ_β) V_γ̄`,
/// * `[X_α, V_β] = (∂̇_β N^γ_α) V_γ`, `[X_α, V_β̄] = (∂̇_β̄ N^γ_α) V_γ`,
/// * `[V_α, V_β] = [V_α, V_β̄] = 0`.
///
/// Needs a [`Depth::Full`] geometry.
pub fn adapted_brackets(g: &PointGeometry) -> BracketTable {
    let m = g.m();
    let mut r = vec![vec![vec![ZERO; m]; m]; m];
    let mut mixed = vec![vec![vec![ZERO; m]; m]; m];
    let mut vdot = vec![vec![vec![ZERO; m]; m]; m];
    let mut vdot_bar = vec![vec![vec![ZERO; m]; m]; m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let cn: Complex64 = (0..m).map(|e| g.structure[a][b][e] * g.n[c][e].value).sum();
                r[c][a][b] = cn - g.delta(a, &g.n[c][b]) + g.delta(b, &g.n[c][a]);
                mixed[a][b][c] = g.delta_bar(b, &g.n[c][a]);
                vdot[a][b][c] = g.vdot(b, &g.n[c][a]);
                vdot_bar[a][b][c] = g.vdot_bar(b, &g.n[c][a]);
            }
        }
    }
    let d = 4 * m;
    let entries = fill_antisymmetric(m, |x, y| {
        let mut v = vec![ZERO; d];
        let (a, b) = (x.index, y.index);
        match (x.kind, y.kind) {
            (FrameKind::X, FrameKind::X) => {
                for c in 0..m {
                    put(&mut v, FrameVector::x(c), m, g.structure[a][b][c]);
                    put(&mut v, FrameVector::v(c), m, r[c][a][b]);
                }
            }
            (FrameKind::X, FrameKind::XBar) => {
                for c in 0..m {
                    put(&mut v, FrameVector::v(c), m, mixed[a][b][c]);
                    put(&mut v, FrameVector::vbar(c), m, -mixed[b][a][c].conj());
                }
            }
            (FrameKind::X, FrameKind::V) => {
                for c in 0..m {
                    put(&mut v, FrameVector::v(c), m, vdot[a][b][c]);
                }
            }
            (FrameKind::X, FrameKind::VBar) => {
                for c in 0..m {
                    put(&mut v, FrameVector::v(c), m, vdot_bar[a][b][c]);
                }
            }
            _ => {}
        }
        v
    });
    BracketTable { m, entries, r, mixed, vdot, vdot_bar }
}

/// Real coordinate directions `(x_k, y_k, a_α, b_α)` as point shifts.
fn shift(p: &Point, j: usize, h: f64) -> Point {
    let (n, m) = (p.z.len(), p.u.len());
    let mut q = p.clone();
    match j {
        j if j < n => q.z[j] += Complex64::new(h, 0.0),
        j if j < 2 * n => q.z[j - n] += Complex64::new(0.0, h),
        j if j < 2 * n + m => q.u[j - 2 * n] += Complex64::new(h, 0.0),
        j => q.u[j - 2 * n - m] += Complex64::new(0.0, h),
    }
    q
}

/// Commutator oracle for the adapted frame.
///
/// Frame vectors act as vector fields through `ρ_T`. For probe functions
/// `z_k, z̄_k, u_α, ū_α, z_k u_α` the inner derivative `B(g)` is exact and
/// the outer one is a central difference, using `N` recomputed at the
/// shifted points. The coordinate coefficients of `[A, B]` follow by least
/// squares and are then rewritten in the adapted frame.
pub struct BracketOracle {
    at: PointGeometry,
    plus: Vec<PointGeometry>,
    minus: Vec<PointGeometry>,
    step: f64,
}

/// A linear probe function: value and exact Wirtinger gradient at a point.
fn probes(p: &Point) -> Vec<Vec<Complex64>> {
    let (n, m) = (p.z.len(), p.u.len());
    let len = 2 * (n + m);
    let mut out = Vec::new();
    for s in 0..len {
        let mut g = vec![ZERO; len];
        g[s] = Complex64::new(1.0, 0.0);
        out.push(g);
    }
    for k in 0..n {
        for a in 0..m {
            let mut g = vec![ZERO; len];
            g[k] = p.u[a];
            g[2 * n + a] = p.z[k];
            out.push(g);
        }
    }
    out
}

impl BracketOracle {
    pub fn new(model: &AlgebroidModel, p: &Point) -> Result<Self, GeometryError> {
        let at = PointGeometry::compute(model, p, Depth::NOnly)?;
        let step = FD_STEP;
        let len = model.layout().len();
        let mut plus = Vec::with_capacity(len);
        let mut minus = Vec::with_capacity(len);
        for j in 0..len {
            plus.push(PointGeometry::compute(model, &shift(p, j, step), Depth::NOnly)?);
            minus.push(PointGeometry::compute(model, &shift(p, j, -step), Depth::NOnly)?);
        }
        Ok(Self { at, plus, minus, step })
    }

    /// `B(g)` at a sample geometry; the probe gradient is affine in the
    /// point so it is re-evaluated there.
    fn inner(geo: &PointGeometry, b: FrameVector, probe: usize) -> Complex64 {
        let field = coordinate_field(geo, b);
        let grad = &probes(&geo.point)[probe];
        field.iter().zip(grad).map(|(x, y)| x * y).sum()
    }

    fn outer(&self, a: FrameVector, b: FrameVector, probe: usize) -> Complex64 {
        let layout = self.at.layout;
        let real = wirtinger_to_real(layout, &coordinate_field(&self.at, a));
        let mut acc = ZERO;
        for (j, r) in real.iter().enumerate() {
            if *r == ZERO {
                continue;
            }
            let d = (Self::inner(&self.plus[j], b, probe) - Self::inner(&self.minus[j], b, probe)) / (2.0 * self.step);
            acc += r * d;
        }
        acc
    }

    /// Coordinate coefficients `w_s` of `[A, B] = Σ w_s ∂_s` and the
    /// least-squares residual of the probe system.
    pub fn coordinate_bracket(&self, a: FrameVector, b: FrameVector) -> Result<(Vec<Complex64>, f64), GeometryError> {
        let rows = probes(&self.at.point);
        let rhs: Vec<Complex64> =
            (0..rows.len()).map(|i| self.outer(a, b, i) - self.outer(b, a, i)).collect();
        linalg::least_squares(&rows, &rhs).ok_or(GeometryError::IllConditionedProbe("probe matrix is singular"))
    }

    /// `[A, B]` in the adapted frame.
    ///
    /// Fails with `IllConditionedProbe` when the bracket has a horizontal
    /// part that the anchor cannot resolve (rank `ρ < m`): the `Z_α`
    /// components are then invisible to vector fields on `E`.
    pub fn bracket(&self, a: FrameVector, b: FrameVector) -> Result<Vec<Complex64>, GeometryError> {
        let g = &self.at;
        let (n, m) = (g.n(), g.m());
        let layout = g.layout;
        let (w, _) = self.coordinate_bracket(a, b)?;
        let wz: Vec<Complex64> = (0..n).map(|k| w[layout.z(k)]).collect();
        let wzb: Vec<Complex64> = (0..n).map(|k| w[layout.zbar(k)]).collect();
        let rho_t: Matrix = (0..n).map(|k| (0..m).map(|c| g.rho[c][k].value).collect()).collect();
        let rho_tb: Matrix = rho_t.iter().map(|r| r.iter().map(|x| x.conj()).collect()).collect();
        let scale = 1.0 + rho_t.iter().flatten().map(|x| x.modulus()).fold(0.0, f64::max);
        let solve = |rhs: &[Complex64], mat: &Matrix| -> Result<Vec<Complex64>, GeometryError> {
            if rhs.iter().all(|x| x.modulus() <= 1e-6 * scale) {
                return Ok(vec![ZERO; m]);
            }
            if m > n {
                return Err(GeometryError::IllConditionedProbe("anchor rank is below the fiber dimension"));
            }
            let (x, res) = linalg::least_squares(mat, rhs)
                .ok_or(GeometryError::IllConditionedProbe("anchor is rank-deficient"))?;
            if res > 1e-6 * scale {
                return Err(GeometryError::IllConditionedProbe("horizontal part is outside the anchor image"));
            }
            Ok(x)
        };
        let x = solve(&wz, &rho_t)?;
        let xb = solve(&wzb, &rho_tb)?;
        let mut out = vec![ZERO; 4 * m];
        for c in 0..m {
            out[FrameVector::x(c).position(m)] = x[c];
            out[FrameVector::xbar(c).position(m)] = xb[c];
            let mut v = w[layout.u(c)];
            let mut vb = w[layout.ubar(c)];
            for e in 0..m {
                v += x[e] * g.n[c][e].value;
                vb += xb[e] * g.n[c][e].value.conj();
            }
            out[FrameVector::v(c).position(m)] = v;
            out[FrameVector::vbar(c).position(m)] = vb;
        }
        Ok(out)
    }
}

/// One-shot form of [`BracketOracle::bracket`].
pub fn bracket_oracle(
    model: &AlgebroidModel,
    p: &Point,
    a: FrameVector,
    b: FrameVector,
) -> Result<Vec<Complex64>, GeometryError> {
    BracketOracle::new(model, p)?.bracket(a, b)
}

/// `H[σ][α][β] = δ_β N^σ_α − δ_α N^σ_β`, the vertical part of `[δ_α, δ_β]`.
///
/// With `𝒞 = 0` this vanishes for the Chern-Finsler connection. In general
/// `[δ_α, δ_β]` also carries `𝒞^γ_{αβ} δ_γ`, whose vertical part is
/// `−𝒞^γ_{αβ} N^σ_γ`, and `H + 𝒞N` is what vanishes.
pub fn horizontal_residual(g: &PointGeometry) -> Vec<Matrix> {
    let m = g.m();
    (0..m)
        .map(|s| {
            (0..m)
                .map(|a| (0..m).map(|b| g.delta(b, &g.n[s][a]) - g.delta(a, &g.n[s][b])).collect())
                .collect()
        })
        .collect()
}
