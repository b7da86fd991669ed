use core::fmt;

/// Which coordinate family a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlotKind {
    Z,
    ZBar,
    U,
    UBar,
}

impl SlotKind {
    pub fn conjugate(self) -> Self {
        match self {
            SlotKind::Z => SlotKind::ZBar,
            SlotKind::ZBar => SlotKind::Z,
            SlotKind::U => SlotKind::UBar,
            SlotKind::UBar => SlotKind::U,
        }
    }

    pub fn is_barred(self) -> bool {
        matches!(self, SlotKind::ZBar | SlotKind::UBar)
    }

    pub fn is_fiber(self) -> bool {
        matches!(self, SlotKind::U | SlotKind::UBar)
    }
}

/// A variable slot: coordinate family plus 1-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarSlot {
    pub kind: SlotKind,
    pub index: usize,
}

impl VarSlot {
    pub const fn new(kind: SlotKind, index: usize) -> Self {
        Self { kind, index }
    }

    pub const fn z(index: usize) -> Self {
        Self::new(SlotKind::Z, index)
    }

    pub const fn zbar(index: usize) -> Self {
        Self::new(SlotKind::ZBar, index)
    }

    pub const fn u(index: usize) -> Self {
        Self::new(SlotKind::U, index)
    }

    pub const fn ubar(index: usize) -> Self {
        Self::new(SlotKind::UBar, index)
    }

    pub fn conjugate(self) -> Self {
        Self::new(self.kind.conjugate(), self.index)
    }
}

impl fmt::Display for VarSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SlotKind::Z => write!(f, "z{}", self.index),
            SlotKind::ZBar => write!(f, "conj(z{})", self.index),
            SlotKind::U => write!(f, "u{}", self.index),
            SlotKind::UBar => write!(f, "conj(u{})", self.index),
        }
    }
}

/// Dimensions and holomorphy restriction applied while parsing.
///
/// With `allow_antiholomorphic == false` only `z_k` may appear: this is the
/// context for anchor coefficients and structure functions, which are
/// holomorphic functions on the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotContext {
    pub n: usize,
    pub m: usize,
    pub allow_antiholomorphic: bool,
}

impl SlotContext {
    pub fn full(n: usize, m: usize) -> Self {
        Self { n, m, allow_antiholomorphic: true }
    }

    pub fn holomorphic(n: usize, m: usize) -> Self {
        Self { n, m, allow_antiholomorphic: false }
    }
}
