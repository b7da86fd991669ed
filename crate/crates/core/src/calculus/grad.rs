use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::SlotLayout;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A value together with its Wirtinger gradient over all `2(n+m)` slots
/// (layout order). An empty gradient means "value only": arithmetic then
/// never materializes derivatives, and [`Grad::d`] reads zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Grad {
    pub value: Complex64,
    pub grad: Vec<Complex64>,
}

impl Grad {
    pub fn new(value: Complex64, grad: Vec<Complex64>) -> Self {
        Self { value, grad }
    }

    pub fn constant(value: Complex64) -> Self {
        Self { value, grad: Vec::new() }
    }

    pub fn zero() -> Self {
        Self::constant(ZERO)
    }

    pub fn d(&self, i: usize) -> Complex64 {
        self.grad.get(i).copied().unwrap_or(ZERO)
    }

    pub fn has_gradient(&self) -> bool {
        !self.grad.is_empty()
    }

    fn zip(&self, other: &Grad, f: impl Fn(Complex64, Complex64) -> Complex64) -> Vec<Complex64> {
        let len = self.grad.len().max(other.grad.len());
        (0..len).map(|i| f(self.d(i), other.d(i))).collect()
    }

    pub fn scale(&self, c: Complex64) -> Grad {
        Grad { value: self.value * c, grad: self.grad.iter().map(|g| g * c).collect() }
    }

    pub fn inv(&self) -> Grad {
        let r = self.value.inv();
        let k = -r * r;
        Grad { value: r, grad: self.grad.iter().map(|g| g * k).collect() }
    }

    pub fn div(&self, other: &Grad) -> Grad {
        self * &other.inv()
    }

    /// `conj f`: since `∂_s conj(f) = conj(∂_{s̄} f)`, the gradient is
    /// conjugated and permuted onto the twin slots.
    pub fn conj(&self, layout: SlotLayout) -> Grad {
        let grad = if self.grad.is_empty() {
            Vec::new()
        } else {
            (0..layout.len()).map(|i| self.d(layout.conj_index(i)).conj()).collect()
        };
        Grad { value: self.value.conj(), grad }
    }

    /// Derivative along the vector field `Σ_s v_s ∂_s`.
    pub fn along(&self, v: &[Complex64]) -> Complex64 {
        self.grad.iter().zip(v).map(|(g, c)| g * c).sum()
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Grad>>(items: I) -> Grad {
        items.into_iter().fold(Grad::zero(), |acc, g| &acc + g)
    }

    /// Zero with a zero gradient of length `len` (or value only if `len == 0`).
    pub fn zeros(len: usize) -> Grad {
        Grad { value: ZERO, grad: vec![ZERO; len] }
    }
}

impl Add for &Grad {
    type Output = Grad;
    fn add(self, rhs: &Grad) -> Grad {
        Grad { value: self.value + rhs.value, grad: self.zip(rhs, |a, b| a + b) }
    }
}

impl Sub for &Grad {
    type Output = Grad;
    fn sub(self, rhs: &Grad) -> Grad {
        Grad { value: self.value - rhs.value, grad: self.zip(rhs, |a, b| a - b) }
    }
}

impl Mul for &Grad {
    type Output = Grad;
    // product rule
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Grad) -> Grad {
        let (a, b) = (self.value, rhs.value);
        Grad { value: a * b, grad: self.zip(rhs, |da, db| da * b + a * db) }
    }
}

impl Neg for &Grad {
    type Output = Grad;
    fn neg(self) -> Grad {
        Grad { value: -self.value, grad: self.grad.iter().map(|g| -g).collect() }
    }
}

impl Add for Grad {
    type Output = Grad;
    fn add(self, rhs: Grad) -> Grad {
        &self + &rhs
    }
}

impl Sub for Grad {
    type Output = Grad;
    fn sub(self, rhs: Grad) -> Grad {
        &self - &rhs
    }
}

impl Mul for Grad {
    type Output = Grad;
    fn mul(self, rhs: Grad) -> Grad {
        &self * &rhs
    }
}

impl Neg for Grad {
    type Output = Grad;
    fn neg(self) -> Grad {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use crate::fmath::ComplexMath;
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_and_quotient_rules() {
        // f = z (slot 0), g = z̄ (slot 1) on a 1+0 layout
        let f = Grad::new(c(0.3, 0.4), vec![c(1.0, 0.0), ZERO]);
        let g = Grad::new(c(0.3, -0.4), vec![ZERO, c(1.0, 0.0)]);
        let p = &f * &g;
        assert!((p.value - c(0.25, 0.0)).modulus() < 1e-15);
        assert_eq!(p.grad, vec![g.value, f.value]);
        let q = f.div(&g);
        let expected_dz = g.value.inv();
        assert!((q.d(0) - expected_dz).modulus() < 1e-14);
    }

    #[test]
    fn conjugation_swaps_slots() {
        let layout = SlotLayout::new(1, 0);
        let f = Grad::new(c(0.3, 0.4), vec![c(1.0, 0.0), ZERO]);
        let g = f.conj(layout);
        assert_eq!(g.value, c(0.3, -0.4));
        assert_eq!(g.grad, vec![ZERO, c(1.0, 0.0)]);
    }

    #[test]
    fn value_only_stays_value_only() {
        let a = Grad::constant(c(2.0, 0.0));
        let b = Grad::constant(c(3.0, 1.0));
        assert!(!(&a * &b).has_gradient());
        assert!(!a.conj(SlotLayout::new(2, 2)).has_gradient());
    }
}
