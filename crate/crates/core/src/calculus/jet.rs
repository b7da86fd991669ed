use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use once_cell::race::OnceBox;

use super::{Point, SlotLayout};
use crate::exprlang::{EvalError, Expr, VarSlot};

pub const MAX_JET_ORDER: usize = 4;

/// Sorted multiset of at most four slots, the key of a mixed partial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotMultiset {
    len: u8,
    slots: [VarSlot; MAX_JET_ORDER],
}

const FILLER: VarSlot = VarSlot::z(0);

impl SlotMultiset {
    pub const fn empty() -> Self {
        Self { len: 0, slots: [FILLER; MAX_JET_ORDER] }
    }

    /// Panics when more than four slots are given.
    pub fn from_slots(slots: &[VarSlot]) -> Self {
        assert!(slots.len() <= MAX_JET_ORDER, "jets are limited to order {MAX_JET_ORDER}");
        let mut out = Self::empty();
        out.slots[..slots.len()].copy_from_slice(slots);
        out.len = slots.len() as u8;
        out.slots[..slots.len()].sort_unstable();
        out
    }

    pub fn with(&self, slot: VarSlot) -> Self {
        let mut v: Vec<VarSlot> = self.slots().to_vec();
        v.push(slot);
        Self::from_slots(&v)
    }

    pub fn slots(&self) -> &[VarSlot] {
        &self.slots[..self.len as usize]
    }

    pub fn order(&self) -> usize {
        self.len as usize
    }

    /// Splits off the largest slot: `self == rest.with(last)`.
    pub fn split_last(&self) -> Option<(Self, VarSlot)> {
        let n = self.order();
        if n == 0 {
            return None;
        }
        Some((Self::from_slots(&self.slots[..n - 1]), self.slots[n - 1]))
    }

    /// All multisets of size `0..=order` over the layout's slots.
    pub fn enumerate(layout: SlotLayout, order: usize) -> Vec<Self> {
        fn rec(
            slots: &[VarSlot],
            start: usize,
            cur: &mut Vec<VarSlot>,
            order: usize,
            out: &mut Vec<SlotMultiset>,
        ) {
            out.push(SlotMultiset::from_slots(cur));
            if cur.len() == order {
                return;
            }
            for i in start..slots.len() {
                cur.push(slots[i]);
                rec(slots, i, cur, order, out);
                cur.pop();
            }
        }
        let slots = layout.slots();
        let mut out = Vec::new();
        rec(&slots, 0, &mut Vec::new(), order.min(MAX_JET_ORDER), &mut out);
        out
    }
}

/// Lazily built symbolic derivatives of one expression, memoized per
/// multiset. Each tree is derived from its parent multiset, so repeated
/// requests never re-differentiate. Safe to share across threads; racing
/// initializations produce identical trees.
pub struct DerivativeCache {
    root: Expr,
    layout: SlotLayout,
    entries: BTreeMap<SlotMultiset, OnceBox<Expr>>,
}

impl DerivativeCache {
    pub fn new(root: Expr, layout: SlotLayout, order: usize) -> Self {
        let entries = SlotMultiset::enumerate(layout, order)
            .into_iter()
            .filter(|ms| ms.order() > 0)
            .map(|ms| (ms, OnceBox::new()))
            .collect();
        Self { root: root.normalize(), layout, entries }
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn layout(&self) -> SlotLayout {
        self.layout
    }

    /// Symbolic partial for `ms`. Panics if `ms` exceeds the cache order.
    pub fn get(&self, ms: &SlotMultiset) -> &Expr {
        let Some((parent, last)) = ms.split_last() else {
            return &self.root;
        };
        let cell = self
            .entries
            .get(ms)
            .unwrap_or_else(|| panic!("derivative {ms:?} exceeds the cached order"));
        cell.get_or_init(|| Box::new(self.get(&parent).differentiate(last)))
    }

    pub fn partial(&self, slots: &[VarSlot]) -> &Expr {
        self.get(&SlotMultiset::from_slots(slots))
    }

    pub fn value(&self, slots: &[VarSlot], p: &Point) -> Result<Complex64, EvalError> {
        self.partial(slots).evaluate(p)
    }
}

/// All mixed Wirtinger partials up to some order at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub base: Point,
    pub partials: BTreeMap<SlotMultiset, Complex64>,
}

impl Jet {
    pub fn get(&self, slots: &[VarSlot]) -> Option<Complex64> {
        self.partials.get(&SlotMultiset::from_slots(slots)).copied()
    }

    pub fn value(&self) -> Complex64 {
        self.partials[&SlotMultiset::empty()]
    }
}

/// Every mixed partial of `e` of order `<= order` at `p`, by repeated
/// symbolic differentiation then evaluation.
pub fn jet(e: &Expr, p: &Point, order: usize) -> Result<Jet, EvalError> {
    assert!(order <= MAX_JET_ORDER, "jets are limited to order {MAX_JET_ORDER}");
    let layout = SlotLayout::new(p.z.len(), p.u.len());
    let cache = DerivativeCache::new(e.clone(), layout, order);
    let mut partials = BTreeMap::new();
    for ms in SlotMultiset::enumerate(layout, order) {
        partials.insert(ms, cache.get(&ms).evaluate(p)?);
    }
    Ok(Jet { base: p.clone(), partials })
}
