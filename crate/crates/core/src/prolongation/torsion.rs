use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::brackets::{fill_antisymmetric, BracketTable};
use super::frame::{FrameKind, FrameVector};
use crate::calculus::Grad;
use crate::chernfinsler::PointGeometry;
use crate::fmath::ComplexMath;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `D_W V` for every pair of frame vectors, each coefficient carrying its
/// gradient when the geometry is [`Depth::Full`](crate::chernfinsler::Depth).
///
/// `D_{X_β} X_α = L^γ_{αβ} X_γ`, `D_{X_β} V_α = L^γ_{αβ} V_γ`,
/// `D_{V_β} X_α = C^γ_{αβ} X_γ`, `D_{V_β} V_α = C^γ_{αβ} V_γ`; the
/// connection is of `(1,0)` type, so mixed barred/unbarred pairs vanish and
/// barred pairs are the conjugates.
#[derive(Clone, Debug)]
pub struct ConnectionTable {
    m: usize,
    entries: Vec<Vec<Grad>>,
}

impl ConnectionTable {
    pub fn new(g: &PointGeometry) -> Self {
        let m = g.m();
        let d = 4 * m;
        let mut entries = vec![vec![Grad::zero(); d]; d * d];
        for w in FrameVector::all(m) {
            for v in FrameVector::all(m) {
                if w.kind.is_barred() != v.kind.is_barred() {
                    continue;
                }
                let (wu, vu) = if w.kind.is_barred() { (w.conj(), v.conj()) } else { (w, v) };
                let coef = if wu.kind == FrameKind::X { &g.l } else { &g.c };
                let slot = &mut entries[w.position(m) * d + v.position(m)];
                for t in 0..m {
                    let target = FrameVector::new(vu.kind, t);
                    let c = &coef[t][vu.index][wu.index];
                    if w.kind.is_barred() {
                        slot[target.conj().position(m)] = c.conj(g.layout);
                    } else {
                        slot[target.position(m)] = c.clone();
                    }
                }
            }
        }
        Self { m, entries }
    }

    /// Coefficients of `D_W V`.
    pub fn get(&self, w: FrameVector, v: FrameVector) -> &[Grad] {
        &self.entries[w.position(self.m) * 4 * self.m + v.position(self.m)]
    }

    pub fn values(&self, w: FrameVector, v: FrameVector) -> Vec<Complex64> {
        self.get(w, v).iter().map(|c| c.value).collect()
    }
}

/// The torsion families in list order; every other pair follows by
/// antisymmetry or conjugation.
pub const TORSION_FAMILIES: [(&str, FrameKind, FrameKind); 6] = [
    ("T(X,X)", FrameKind::X, FrameKind::X),
    ("T(X,Xbar)", FrameKind::X, FrameKind::XBar),
    ("T(X,V)", FrameKind::X, FrameKind::V),
    ("T(X,Vbar)", FrameKind::X, FrameKind::VBar),
    ("T(V,V)", FrameKind::V, FrameKind::V),
    ("T(V,Vbar)", FrameKind::V, FrameKind::VBar),
];

/// `T(A, B) = D_A B − D_B A − [A, B]` in closed form, for all pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionTable {
    m: usize,
    pub specialized: bool,
    entries: Vec<Vec<Complex64>>,
}

impl TorsionTable {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, a: FrameVector, b: FrameVector) -> &[Complex64] {
        &self.entries[a.position(self.m) * 4 * self.m + b.position(self.m)]
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(|c| c.modulus()).fold(0.0, f64::max)
    }
}

/// Torsion from the listed closed forms. The general list is written for a
/// `(1,0)` connection (`L^γ̄_{ᾱβ} = C^γ̄_{ᾱβ} = 0`); with `specialized` the
/// Chern-Finsler simplifications `T(X_α, V_β) = −C^γ_{αβ} X_γ` and
/// `T(V_α, V_β) = 0` are used instead.
pub fn torsion_table(g: &PointGeometry, brackets: &BracketTable, specialized: bool) -> TorsionTable {
    let m = g.m();
    let d = 4 * m;
    let l = |c: usize, a: usize, b: usize| g.l[c][a][b].value;
    let cc = |c: usize, a: usize, b: usize| g.c[c][a][b].value;
    let entries = fill_antisymmetric(m, |x, y| {
        let mut v = vec![ZERO; d];
        let (a, b) = (x.index, y.index);
        let mut set = |f: FrameVector, c: Complex64| v[f.position(m)] = c;
        match (x.kind, y.kind) {
            (FrameKind::X, FrameKind::X) => {
                for t in 0..m {
                    set(FrameVector::x(t), l(t, b, a) - l(t, a, b) - g.structure[a][b][t]);
                    set(FrameVector::v(t), -brackets.r[t][a][b]);
                }
            }
            (FrameKind::X, FrameKind::XBar) => {
                for t in 0..m {
                    set(FrameVector::v(t), -brackets.mixed[a][b][t]);
                    set(FrameVector::vbar(t), brackets.mixed[b][a][t].conj());
                }
            }
            (FrameKind::X, FrameKind::V) => {
                for t in 0..m {
                    set(FrameVector::x(t), -cc(t, a, b));
                    if !specialized {
                        set(FrameVector::v(t), l(t, b, a) - brackets.vdot[a][b][t]);
                    }
                }
            }
            (FrameKind::X, FrameKind::VBar) => {
                for t in 0..m {
                    set(FrameVector::v(t), -brackets.vdot_bar[a][b][t]);
                }
            }
            (FrameKind::V, FrameKind::V) if !specialized => {
                for t in 0..m {
                    set(FrameVector::v(t), cc(t, b, a) - cc(t, a, b));
                }
            }
            _ => {}
        }
        v
    });
    TorsionTable { m, specialized, entries }
}

/// `T(A, B)` straight from the definition, with `D` from the connection
/// table and the bracket from `brackets`.
pub fn torsion_from_definition(
    conn: &ConnectionTable,
    brackets: &BracketTable,
    a: FrameVector,
    b: FrameVector,
) -> Vec<Complex64> {
    let dab = conn.values(a, b);
    let dba = conn.values(b, a);
    let br = brackets.get(a, b);
    (0..dab.len()).map(|i| dab[i] - dba[i] - br[i]).collect()
}
