use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::brackets::BracketTable;
use super::frame::{apply, conj_coeffs, FrameKind, FrameVector};
use super::torsion::ConnectionTable;
use crate::chernfinsler::PointGeometry;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

use FrameKind::{VBar as VB, XBar as XB, V, X};
use crate::fmath::ComplexMath;

/// The nonzero curvature families `R(Z, W) V`, keyed by the kinds of
/// `(Z, W, V)` in list order. Twins `R(W, Z) = −R(Z, W)` and conjugates
/// follow.
pub const CURVATURE_FAMILIES: [(&str, [FrameKind; 3]); 15] = [
    ("R(X,X)X", [X, X, X]),
    ("R(X,Xbar)X", [X, XB, X]),
    ("R(Xbar,X)X", [XB, X, X]),
    ("R(X,X)V", [X, X, V]),
    ("R(X,Xbar)V", [X, XB, V]),
    ("R(Xbar,X)V", [XB, X, V]),
    ("R(X,V)V", [X, V, V]),
    ("R(X,Vbar)V", [X, VB, V]),
    ("R(Xbar,V)V", [XB, V, V]),
    ("R(V,V)X", [V, V, X]),
    ("R(V,Vbar)X", [V, VB, X]),
    ("R(Vbar,V)X", [VB, V, X]),
    ("R(V,V)V", [V, V, V]),
    ("R(V,Vbar)V", [V, VB, V]),
    ("R(Vbar,V)V", [VB, V, V]),
];

/// How a triple relates to the listed families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Listing {
    /// Family index, negated for a twin, conjugated for a barred copy.
    Listed { family: usize, twin: bool, conj: bool },
    /// Not in the list, so claimed to vanish.
    AssertedZero,
}

fn family_of(kinds: [FrameKind; 3]) -> Option<usize> {
    CURVATURE_FAMILIES.iter().position(|(_, k)| *k == kinds)
}

pub fn listing(z: FrameVector, w: FrameVector, v: FrameVector) -> Listing {
    let (zk, wk, vk) = (z.kind, w.kind, v.kind);
    let tries = [
        ([zk, wk, vk], false, false),
        ([wk, zk, vk], true, false),
        ([zk.conj(), wk.conj(), vk.conj()], false, true),
        ([wk.conj(), zk.conj(), vk.conj()], true, true),
    ];
    for (kinds, twin, conj) in tries {
        if let Some(family) = family_of(kinds) {
            return Listing::Listed { family, twin, conj };
        }
    }
    Listing::AssertedZero
}

/// `R(Z, W) V` for all `(4m)³` triples of frame vectors, from the listed
/// closed forms. Unlisted triples hold zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTable {
    m: usize,
    entries: Vec<Vec<Complex64>>,
}

impl CurvatureTable {
    pub fn m(&self) -> usize {
        self.m
    }

    fn index(&self, z: FrameVector, w: FrameVector, v: FrameVector) -> usize {
        let d = 4 * self.m;
        (z.position(self.m) * d + w.position(self.m)) * d + v.position(self.m)
    }

    pub fn get(&self, z: FrameVector, w: FrameVector, v: FrameVector) -> &[Complex64] {
        &self.entries[self.index(z, w, v)]
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(|c| c.modulus()).fold(0.0, f64::max)
    }
}

/// The `τ` coefficient of family `f` at unbarred indices `(a, b, g)`.
fn closed_form(geo: &PointGeometry, br: &BracketTable, f: usize, a: usize, b: usize, gi: usize, t: usize) -> Complex64 {
    let m = geo.m();
    let l = &geo.l;
    let c = &geo.c;
    let lv = |x: usize, y: usize, z: usize| l[x][y][z].value;
    let cv = |x: usize, y: usize, z: usize| c[x][y][z].value;
    let sum = |f: &dyn Fn(usize) -> Complex64| -> Complex64 { (0..m).map(f).sum() };
    match f {
        // R(X_α, X_β) on X_γ or V_γ
        0 | 3 => {
            geo.delta(a, &l[t][gi][b]) - geo.delta(b, &l[t][gi][a])
                + sum(&|s| {
                    lv(s, gi, b) * lv(t, s, a) - lv(s, gi, a) * lv(t, s, b)
                        - geo.structure[a][b][s] * lv(t, gi, s)
                        - br.r[s][a][b] * cv(t, gi, s)
                })
        }
        1 | 4 => -geo.delta_bar(b, &l[t][gi][a]) - sum(&|s| br.r_mixed(s, a, b) * cv(t, gi, s)),
        2 | 5 => geo.delta_bar(a, &l[t][gi][b]) - sum(&|s| br.r_mixed_conj(s, a, b) * cv(t, gi, s)),
        6 => {
            geo.delta(a, &c[t][gi][b]) - geo.vdot(b, &l[t][gi][a])
                + sum(&|s| cv(s, gi, b) * lv(t, s, a) - lv(s, gi, a) * cv(t, s, b) - lv(s, b, a) * cv(t, gi, s))
        }
        7 => -geo.vdot_bar(b, &l[t][gi][a]) - sum(&|s| br.vdot_bar[a][b][s] * cv(t, gi, s)),
        8 => geo.delta_bar(a, &c[t][gi][b]),
        9 | 12 => {
            geo.vdot(a, &c[t][gi][b]) - geo.vdot(b, &c[t][gi][a])
                + sum(&|s| cv(s, gi, b) * cv(t, s, a) - cv(s, gi, a) * cv(t, s, b))
        }
        10 | 13 => -geo.vdot_bar(b, &c[t][gi][a]),
        11 | 14 => geo.vdot_bar(a, &c[t][gi][b]),
        _ => unreachable!("15 families"),
    }
}

/// Closed-form curvature table. Needs a `Full` geometry.
pub fn curvature_table(geo: &PointGeometry, br: &BracketTable) -> CurvatureTable {
    let m = geo.m();
    let d = 4 * m;
    let mut fam: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(CURVATURE_FAMILIES.len());
    for f in 0..CURVATURE_FAMILIES.len() {
        let target = CURVATURE_FAMILIES[f].1[2];
        let mut per = Vec::with_capacity(m * m * m);
        for a in 0..m {
            for b in 0..m {
                for g in 0..m {
                    let mut v = vec![ZERO; d];
                    for t in 0..m {
                        v[FrameVector::new(target, t).position(m)] = closed_form(geo, br, f, a, b, g, t);
                    }
                    per.push(v);
                }
            }
        }
        fam.push(per);
    }
    let mut entries = vec![vec![ZERO; d]; d * d * d];
    let all = FrameVector::all(m);
    for &z in &all {
        for &w in &all {
            for &v in &all {
                let i = (z.position(m) * d + w.position(m)) * d + v.position(m);
                if let Listing::Listed { family, twin, conj } = listing(z, w, v) {
                    let (first, second) = if twin { (w, z) } else { (z, w) };
                    let k = (first.index * m + second.index) * m + v.index;
                    let mut val = fam[family][k].clone();
                    if conj {
                        val = conj_coeffs(&val, m);
                    }
                    if twin {
                        val.iter_mut().for_each(|x| *x = -*x);
                    }
                    entries[i] = val;
                }
            }
        }
    }
    CurvatureTable { m, entries }
}

/// `R(Z, W) V = D_Z D_W V − D_W D_Z V − D_[Z,W] V`, expanding each
/// covariant derivative through the connection table (including the
/// derivatives of its coefficients) and taking the bracket from `br`.
pub fn curvature_oracle(
    geo: &PointGeometry,
    conn: &ConnectionTable,
    br: &BracketTable,
    z: FrameVector,
    w: FrameVector,
    v: FrameVector,
) -> Vec<Complex64> {
    let m = geo.m();
    let d = 4 * m;
    let all = FrameVector::all(m);
    // D_A (D_B V)
    let second = |a: FrameVector, b: FrameVector| -> Vec<Complex64> {
        let inner = conn.get(b, v);
        let mut out = vec![ZERO; d];
        for (i, e) in all.iter().enumerate() {
            let coef = &inner[i];
            out[i] += apply(geo, a, coef);
            if coef.value != ZERO {
                for (j, x) in conn.values(a, *e).iter().enumerate() {
                    out[j] += coef.value * x;
                }
            }
        }
        out
    };
    let zw = second(z, w);
    let wz = second(w, z);
    let bracket = br.get(z, w);
    let mut out: Vec<Complex64> = (0..d).map(|i| zw[i] - wz[i]).collect();
    for (j, e) in all.iter().enumerate() {
        if bracket[j] != ZERO {
            for (i, x) in conn.values(*e, v).iter().enumerate() {
                out[i] -= bracket[j] * x;
            }
        }
    }
    out
}
