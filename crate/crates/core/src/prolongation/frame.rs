use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::calculus::Grad;
use crate::chernfinsler::PointGeometry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrameKind {
    X,
    V,
    XBar,
    VBar,
}

impl FrameKind {
    pub const ALL: [FrameKind; 4] = [FrameKind::X, FrameKind::V, FrameKind::XBar, FrameKind::VBar];

    pub fn conj(self) -> Self {
        match self {
            FrameKind::X => FrameKind::XBar,
            FrameKind::V => FrameKind::VBar,
            FrameKind::XBar => FrameKind::X,
            FrameKind::VBar => FrameKind::V,
        }
    }

    pub fn is_barred(self) -> bool {
        matches!(self, FrameKind::XBar | FrameKind::VBar)
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, FrameKind::X | FrameKind::XBar)
    }

    fn slot(self) -> usize {
        match self {
            FrameKind::X => 0,
            FrameKind::V => 1,
            FrameKind::XBar => 2,
            FrameKind::VBar => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            FrameKind::X | FrameKind::XBar => "X",
            FrameKind::V | FrameKind::VBar => "V",
        }
    }
}

/// One vector of the adapted frame `{X_α, V_α, X_ᾱ, V_ᾱ}`; `index` is
/// 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrameVector {
    pub kind: FrameKind,
    pub index: usize,
}

impl FrameVector {
    pub const fn new(kind: FrameKind, index: usize) -> Self {
        Self { kind, index }
    }

    pub const fn x(i: usize) -> Self {
        Self::new(FrameKind::X, i)
    }
    pub const fn v(i: usize) -> Self {
        Self::new(FrameKind::V, i)
    }
    pub const fn xbar(i: usize) -> Self {
        Self::new(FrameKind::XBar, i)
    }
    pub const fn vbar(i: usize) -> Self {
        Self::new(FrameKind::VBar, i)
    }

    pub fn conj(self) -> Self {
        Self::new(self.kind.conj(), self.index)
    }

    /// Position in a frame coefficient vector of length `4m`.
    pub fn position(self, m: usize) -> usize {
        self.kind.slot() * m + self.index
    }

    pub fn from_position(pos: usize, m: usize) -> Self {
        Self::new(FrameKind::ALL[pos / m], pos % m)
    }

    pub fn all(m: usize) -> Vec<Self> {
        (0..4 * m).map(|i| Self::from_position(i, m)).collect()
    }
}

impl fmt::Display for FrameVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = if self.kind.is_barred() { "bar" } else { "" };
        write!(f, "{}{}{}", self.kind.symbol(), self.index + 1, bar)
    }
}

/// `conj` of a frame coefficient vector: barred and unbarred blocks swap.
pub fn conj_coeffs(v: &[Complex64], m: usize) -> Vec<Complex64> {
    (0..v.len()).map(|i| v[FrameVector::from_position(i, m).conj().position(m)].conj()).collect()
}

/// Coefficients of a frame vector as a vector field on the slots
/// `(z, z̄, u, ū)`: `ρ_T(X_α) = δ_α = ρ^k_α ∂_k − N^β_α ∂̇_β`, `V_α = ∂̇_α`
/// and the conjugates.
pub fn coordinate_field(g: &PointGeometry, a: FrameVector) -> Vec<Complex64> {
    let layout = g.layout;
    match a.kind {
        FrameKind::X => g.delta_field(a.index),
        FrameKind::XBar => g.conj_field(&g.delta_field(a.index)),
        FrameKind::V | FrameKind::VBar => {
            let mut v = vec![Complex64::new(0.0, 0.0); layout.len()];
            let i = if a.kind == FrameKind::V { layout.u(a.index) } else { layout.ubar(a.index) };
            v[i] = Complex64::new(1.0, 0.0);
            v
        }
    }
}

/// `A(f)` for a tensor entry carrying a gradient.
pub fn apply(g: &PointGeometry, a: FrameVector, f: &Grad) -> Complex64 {
    match a.kind {
        FrameKind::V => f.d(g.layout.u(a.index)),
        FrameKind::VBar => f.d(g.layout.ubar(a.index)),
        _ => f.along(&coordinate_field(g, a)),
    }
}
