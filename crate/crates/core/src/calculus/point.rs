use alloc::vec::Vec;
use num_complex::Complex64;

use crate::exprlang::{SlotKind, VarSlot};

/// Evaluation location: base coordinates `z` and fiber coordinates `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub z: Vec<Complex64>,
    pub u: Vec<Complex64>,
}

impl Point {
    pub fn new(z: Vec<Complex64>, u: Vec<Complex64>) -> Self {
        Self { z, u }
    }

    pub fn fiber_norm(&self) -> f64 {
        crate::fmath::sqrt(self.u.iter().map(|c| c.norm_sqr()).sum::<f64>())
    }

    /// Value of a slot at this point (barred slots are conjugates).
    pub fn slot_value(&self, slot: VarSlot) -> Option<Complex64> {
        let i = slot.index.checked_sub(1)?;
        match slot.kind {
            SlotKind::Z => self.z.get(i).copied(),
            SlotKind::ZBar => self.z.get(i).map(|c| c.conj()),
            SlotKind::U => self.u.get(i).copied(),
            SlotKind::UBar => self.u.get(i).map(|c| c.conj()),
        }
    }

    /// Same base point with the fiber coordinates scaled by `lambda`.
    pub fn scale_fiber(&self, lambda: Complex64) -> Self {
        Self { z: self.z.clone(), u: self.u.iter().map(|c| c * lambda).collect() }
    }

    /// Shift the underlying coordinate of an unbarred slot by `delta`.
    /// A barred slot shifts the same coordinate (its conjugate moves too).
    pub fn shifted(&self, slot: VarSlot, delta: Complex64) -> Self {
        let mut p = self.clone();
        let i = slot.index - 1;
        if slot.kind.is_fiber() {
            p.u[i] += delta;
        } else {
            p.z[i] += delta;
        }
        p
    }
}
