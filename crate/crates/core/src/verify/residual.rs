use alloc::string::String;

use num_complex::Complex64;
use crate::fmath::ComplexMath;

/// Largest deviation of one named identity together with the magnitude of
/// the quantities involved. The normalized residual `abs / (1 + scale)`
/// mixes absolute and relative error.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: String,
    pub abs: f64,
    pub scale: f64,
}

impl Residual {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), abs: 0.0, scale: 0.0 }
    }

    /// Records `lhs = rhs`.
    pub fn pair(&mut self, lhs: Complex64, rhs: Complex64) {
        self.record((lhs - rhs).modulus(), lhs.modulus().max(rhs.modulus()));
    }

    /// Records `value = 0`, with `scale` the size of the terms that cancel.
    pub fn zero(&mut self, value: Complex64, scale: f64) {
        self.record(value.modulus(), scale);
    }

    pub fn record(&mut self, abs: f64, scale: f64) {
        // NaN must poison the residual rather than vanish in max()
        if abs.is_nan() || self.abs.is_nan() {
            self.abs = f64::NAN;
        } else {
            self.abs = self.abs.max(abs);
        }
        self.scale = self.scale.max(scale);
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = self.scale.max(scale);
        self
    }

    pub fn normalized(&self) -> f64 {
        self.abs / (1.0 + self.scale)
    }
}

/// Worst normalized residual of a set (NaN if any entry is NaN).
pub fn worst(residuals: &[Residual]) -> f64 {
    residuals.iter().map(Residual::normalized).fold(0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}
