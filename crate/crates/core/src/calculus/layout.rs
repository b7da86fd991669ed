use alloc::vec::Vec;

use crate::exprlang::{SlotKind, VarSlot};

/// Dense ordering of the `2(n+m)` slots: `z_1..z_n, z̄_1..z̄_n, u_1..u_m,
/// ū_1..ū_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotLayout {
    pub n: usize,
    pub m: usize,
}

impl SlotLayout {
    pub fn new(n: usize, m: usize) -> Self {
        Self { n, m }
    }

    pub fn len(&self) -> usize {
        2 * (self.n + self.m)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, slot: VarSlot) -> usize {
        let i = slot.index - 1;
        match slot.kind {
            SlotKind::Z => i,
            SlotKind::ZBar => self.n + i,
            SlotKind::U => 2 * self.n + i,
            SlotKind::UBar => 2 * self.n + self.m + i,
        }
    }

    pub fn slot(&self, index: usize) -> VarSlot {
        let (n, m) = (self.n, self.m);
        if index < n {
            VarSlot::z(index + 1)
        } else if index < 2 * n {
            VarSlot::zbar(index - n + 1)
        } else if index < 2 * n + m {
            VarSlot::u(index - 2 * n + 1)
        } else {
            VarSlot::ubar(index - 2 * n - m + 1)
        }
    }

    pub fn conj_index(&self, index: usize) -> usize {
        self.index(self.slot(index).conjugate())
    }

    pub fn slots(&self) -> Vec<VarSlot> {
        (0..self.len()).map(|i| self.slot(i)).collect()
    }

    pub fn z(&self, k: usize) -> usize {
        k
    }

    pub fn zbar(&self, k: usize) -> usize {
        self.n + k
    }

    pub fn u(&self, a: usize) -> usize {
        2 * self.n + a
    }

    pub fn ubar(&self, a: usize) -> usize {
        2 * self.n + self.m + a
    }
}
