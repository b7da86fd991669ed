//! Float math pinned to `libm`.
//!
//! `num-traits` falls back to the platform math library as soon as anything
//! else in the build turns on its `std` feature, and last-place digits then
//! depend on the build. Everything that can reach a report goes through
//! here instead, so results are the same in every build and on every host.

use num_complex::Complex64;

pub(crate) trait ComplexMath {
    /// `|z|` via `hypot`.
    fn modulus(self) -> f64;
    fn cexp(self) -> Complex64;
    fn cln(self) -> Complex64;
}

impl ComplexMath for Complex64 {
    fn modulus(self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    fn cexp(self) -> Complex64 {
        let r = libm::exp(self.re);
        Complex64::new(r * libm::cos(self.im), r * libm::sin(self.im))
    }

    fn cln(self) -> Complex64 {
        Complex64::new(libm::log(self.modulus()), libm::atan2(self.im, self.re))
    }
}

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
