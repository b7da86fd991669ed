use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::Point;

/// Sampling region: a box for each base coordinate and an annulus for the
/// fiber norm.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    /// `[lo, hi]` for `Re z_1, Im z_1, Re z_2, ...` (length `2n`).
    pub z_box: Vec<[f64; 2]>,
    /// `[r_min, r_max]` for `‖u‖`.
    pub u_annulus: [f64; 2],
}

impl Domain {
    pub fn unit(n: usize) -> Self {
        Self { z_box: vec![[-1.0, 1.0]; 2 * n], u_annulus: [0.5, 1.5] }
    }

    /// Accepts either one range per complex coordinate (used for both the
    /// real and imaginary part) or one per real coordinate.
    pub fn from_ranges(n: usize, ranges: &[[f64; 2]], u_annulus: [f64; 2]) -> Result<Self, &'static str> {
        let z_box = if ranges.len() == 2 * n {
            ranges.to_vec()
        } else if ranges.len() == n {
            ranges.iter().flat_map(|r| [*r, *r]).collect()
        } else {
            return Err("z_box needs n or 2n ranges");
        };
        let d = Self { z_box, u_annulus };
        d.check()?;
        Ok(d)
    }

    pub fn check(&self) -> Result<(), &'static str> {
        if self.z_box.iter().any(|[lo, hi]| !(lo.is_finite() && hi.is_finite() && lo <= hi)) {
            return Err("z_box ranges must be finite with lo <= hi");
        }
        let [rmin, rmax] = self.u_annulus;
        if !(rmin.is_finite() && rmax.is_finite() && rmin > 0.0 && rmin <= rmax) {
            return Err("u_annulus must satisfy 0 < r_min <= r_max");
        }
        Ok(())
    }
}

/// Deterministic point generator.
///
/// `z` is uniform in the box; `u` is uniform (by volume) in the annulus,
/// which keeps it away from the singular zero section.
pub struct PointSampler {
    rng: ChaCha8Rng,
    domain: Domain,
    n: usize,
    m: usize,
}

impl PointSampler {
    pub fn new(domain: Domain, n: usize, m: usize, seed: u64) -> Self {
        debug_assert_eq!(domain.z_box.len(), 2 * n);
        Self { rng: ChaCha8Rng::seed_from_u64(seed), domain, n, m }
    }

    fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn uniform(&mut self, [lo, hi]: [f64; 2]) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn base_point(&mut self) -> Vec<Complex64> {
        (0..self.n)
            .map(|k| {
                let re = self.uniform(self.domain.z_box[2 * k]);
                let im = self.uniform(self.domain.z_box[2 * k + 1]);
                Complex64::new(re, im)
            })
            .collect()
    }

    fn fiber_point(&mut self) -> Vec<Complex64> {
        let d = 2 * self.m;
        let dir = loop {
            let v: Vec<f64> = (0..d).map(|_| 2.0 * self.unit() - 1.0).collect();
            let r2: f64 = v.iter().map(|x| x * x).sum();
            if r2 > 1e-12 && r2 <= 1.0 {
                let r = crate::fmath::sqrt(r2);
                break v.into_iter().map(|x| x / r).collect::<Vec<_>>();
            }
        };
        let [rmin, rmax] = self.domain.u_annulus;
        let df = d as f64;
        let t = self.unit();
        let pow = crate::fmath::powf;
        let radius = pow(pow(rmin, df) + t * (pow(rmax, df) - pow(rmin, df)), 1.0 / df);
        (0..self.m).map(|a| Complex64::new(dir[2 * a], dir[2 * a + 1]) * radius).collect()
    }

    pub fn next_point(&mut self) -> Point {
        let z = self.base_point();
        let u = self.fiber_point();
        Point::new(z, u)
    }
}

pub fn sample_points(domain: &Domain, n: usize, m: usize, seed: u64, count: usize) -> Vec<Point> {
    let mut s = PointSampler::new(domain.clone(), n, m, seed);
    (0..count).map(|_| s.next_point()).collect()
}
