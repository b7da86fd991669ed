//! The Finsler function: metric tensor, convexity and the homogeneity
//! identities.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebroid::AlgebroidModel;
use crate::calculus::Point;
use crate::error::GeometryError;
use crate::exprlang::{EvalError, VarSlot};
use crate::linalg::{self, Matrix};
use crate::verify::Residual;
use crate::fmath::ComplexMath;

/// Above this spectral condition number the metric counts as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// Relative Hermitian defect above which `F` is taken to be non-real.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// `h_{αβ̄}` at a point with its inverse and spectrum.
///
/// `h[α][β] = h_{αβ̄}` and `h_inv[β][α] = h^{β̄α}`, so that
/// `Σ_β h_{αβ̄} h^{β̄γ} = δ_α^γ` is the matrix product `h · h_inv = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricValue {
    pub h: Matrix,
    pub h_inv: Matrix,
    pub eigenvalues: Vec<f64>,
    pub min_eigen: f64,
}

impl MetricValue {
    pub fn is_convex(&self) -> bool {
        self.min_eigen > 0.0
    }
}

pub(crate) fn check_fiber(p: &Point) -> Result<(), GeometryError> {
    if p.fiber_norm() == 0.0 {
        Err(GeometryError::NonzeroFiberRequired)
    } else {
        Ok(())
    }
}

impl AlgebroidModel {
    /// A mixed Wirtinger partial of `F` at `p`.
    pub fn finsler_partial(&self, slots: &[VarSlot], p: &Point) -> Result<Complex64, EvalError> {
        self.finsler_derivatives().value(slots, p)
    }

    /// `h_{αβ̄} = ∂̇_α ∂̇_β̄ F` as `[α][β]`, without any checks.
    pub fn metric_tensor(&self, p: &Point) -> Result<Matrix, EvalError> {
        let m = self.m();
        (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| self.finsler_partial(&[VarSlot::u(a + 1), VarSlot::ubar(b + 1)], p))
                    .collect()
            })
            .collect()
    }
}

/// The metric at `p`, rejecting the zero section, non-Hermitian and
/// near-singular metrics.
pub fn metric(model: &AlgebroidModel, p: &Point) -> Result<MetricValue, GeometryError> {
    check_fiber(p)?;
    let h = model.metric_tensor(p)?;
    let scale = linalg::max_abs(&h);
    let defect = linalg::hermitian_defect(&h);
    if !(defect <= HERMITIAN_TOL * (1.0 + scale)) {
        return Err(GeometryError::NonHermitian { defect });
    }
    let eigenvalues = linalg::hermitian_eigenvalues(&h);
    let condition = linalg::hermitian_condition(&eigenvalues);
    if !(condition <= SINGULAR_CONDITION) {
        return Err(GeometryError::SingularMetric { condition });
    }
    let h_inv = linalg::inverse(&h).ok_or(GeometryError::SingularMetric { condition })?;
    let min_eigen = eigenvalues.first().copied().unwrap_or(f64::NAN);
    Ok(MetricValue { h, h_inv, eigenvalues, min_eigen })
}

pub const SCALING_FACTORS: [Complex64; 3] =
    [Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.5)];

/// Residuals of the homogeneity consequences of `F(z, λu) = |λ|² F(z, u)`:
///
/// * i: `(∂̇_α F) u^α = F` and its conjugate,
/// * ii: `h_{αβ̄} u^α = ∂̇_β̄ F`, `h_{αβ̄} ū^β = ∂̇_α F`, `h_{αβ̄} u^α ū^β = F`,
/// * iii: `(∂̇_γ h_{αβ̄}) u^γ = 0`, `(∂̇_γ h_{αβ̄}) u^α = 0`, `(∂̇_γ̄ h_{αβ̄}) ū^γ = 0`,
/// * iv: `h_{αβ} u^α = 0` and `(∂̇_γ h_{αβ̄}) ū^β = h_{αγ}`, with `h_{αβ} = ∂̇_α ∂̇_β F`,
///
/// plus the scaling law itself for `λ ∈ {2, i, ½ + ½i}`.
pub fn homogeneity_residuals(model: &AlgebroidModel, p: &Point) -> Result<Vec<Residual>, GeometryError> {
    check_fiber(p)?;
    let m = model.m();
    let d = |slots: &[VarSlot]| model.finsler_partial(slots, p);
    let u = |a: usize| VarSlot::u(a + 1);
    let ub = |a: usize| VarSlot::ubar(a + 1);
    let uv = &p.u;
    let f = d(&[])?;

    let mut euler = Residual::new("i.euler");
    let mut euler_bar = Residual::new("i.euler_conj");
    let (mut s, mut sb) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut terms: f64 = f.modulus();
    let mut terms_bar: f64 = f.modulus();
    for a in 0..m {
        let t = d(&[u(a)])? * uv[a];
        let tb = d(&[ub(a)])? * uv[a].conj();
        terms = terms.max(t.modulus());
        terms_bar = terms_bar.max(tb.modulus());
        s += t;
        sb += tb;
    }
    euler.pair(s, f);
    euler.record(0.0, terms);
    euler_bar.pair(sb, f);
    euler_bar.record(0.0, terms_bar);

    let h = |a: usize, b: usize| d(&[u(a), ub(b)]);
    let mut h_u = Residual::new("ii.h_u");
    let mut h_ubar = Residual::new("ii.h_ubar");
    let mut h_uu = Residual::new("ii.h_u_ubar");
    let mut quad = Complex64::new(0.0, 0.0);
    for b in 0..m {
        let (mut l, mut r) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for a in 0..m {
            let hab = h(a, b)?;
            l += hab * uv[a];
            r += h(b, a)? * uv[a].conj();
            quad += hab * uv[a] * uv[b].conj();
            h_uu.record(0.0, (hab * uv[a] * uv[b].conj()).modulus());
        }
        h_u.pair(l, d(&[ub(b)])?);
        h_ubar.pair(r, d(&[u(b)])?);
    }
    h_uu.pair(quad, f);

    let mut dh_u = Residual::new("iii.dh_u");
    let mut dh_contract = Residual::new("iii.dh_contract");
    let mut dbarh = Residual::new("iii.dbarh_ubar");
    let mut hsym = Residual::new("iv.hsym_u");
    let mut dh_ubar = Residual::new("iv.dh_ubar");
    for a in 0..m {
        for b in 0..m {
            let (mut x, mut y) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            let mut scale: f64 = 0.0;
            for g in 0..m {
                let t = d(&[u(g), u(a), ub(b)])? * uv[g];
                let tb = d(&[ub(g), u(a), ub(b)])? * uv[g].conj();
                scale = scale.max(t.modulus()).max(tb.modulus());
                x += t;
                y += tb;
            }
            dh_u.zero(x, scale);
            dbarh.zero(y, scale);
            // here b plays γ: Σ_α (∂̇_γ h_{αβ̄}) u^α and Σ_β (∂̇_γ h_{αβ̄}) ū^β
            let g = b;
            let (mut c1, mut c2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            let mut scale2: f64 = 0.0;
            for k in 0..m {
                let t1 = d(&[u(g), u(k), ub(a)])? * uv[k];
                let t2 = d(&[u(g), u(a), ub(k)])? * uv[k].conj();
                scale2 = scale2.max(t1.modulus()).max(t2.modulus());
                c1 += t1;
                c2 += t2;
            }
            dh_contract.zero(c1, scale2);
            dh_ubar.pair(c2, d(&[u(a), u(g)])?);
            let mut c3 = Complex64::new(0.0, 0.0);
            let mut scale3: f64 = 0.0;
            for k in 0..m {
                let t = d(&[u(k), u(b)])? * uv[k];
                scale3 = scale3.max(t.modulus());
                c3 += t;
            }
            if a == 0 {
                hsym.zero(c3, scale3);
            }
        }
    }

    let mut out = alloc::vec![euler, euler_bar, h_u, h_ubar, h_uu, dh_u, dh_contract, dbarh, hsym, dh_ubar];
    for lambda in SCALING_FACTORS {
        let mut r = Residual::new(format!("scaling.{}{:+}i", lambda.re, lambda.im));
        let scaled = model.finsler().evaluate(&p.scale_fiber(lambda))?;
        r.pair(scaled, f * lambda.norm_sqr());
        out.push(r);
    }
    Ok(out)
}

/// Smallest metric eigenvalue over a sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityCertificate {
    pub min_eigen: f64,
    pub worst_point: Option<Point>,
    pub pass: bool,
}

pub fn convexity_certificate(
    model: &AlgebroidModel,
    points: &[Point],
) -> Result<ConvexityCertificate, GeometryError> {
    let mut min = f64::INFINITY;
    let mut worst = None;
    for p in points {
        check_fiber(p)?;
        let h = model.metric_tensor(p)?;
        let ev = linalg::hermitian_eigenvalues(&h);
        let e = ev.first().copied().unwrap_or(f64::NAN);
        if worst.is_none() || e < min || e.is_nan() {
            min = e;
            worst = Some(p.clone());
        }
    }
    Ok(ConvexityCertificate { min_eigen: min, worst_point: worst, pass: min > 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::ModelSource;
    use crate::verify::worst;
    use alloc::string::{String, ToString};
    use alloc::vec;

    fn model(n: usize, m: usize, f: &str) -> AlgebroidModel {
        let rho = (0..m).map(|a| (0..n).map(|k| if a == k { "1" } else { "0" }.to_string()).collect()).collect();
        AlgebroidModel::from_source(&ModelSource {
            n,
            m,
            rho,
            structure: vec![],
            finsler: f.to_string(),
            z_box: None,
            u_annulus: None,
        })
        .unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn flat_metric() {
        let mdl = model(1, 1, "u1*conj(u1)");
        let mv = metric(&mdl, &Point::new(vec![c(0.1, 0.2)], vec![c(0.3, -0.9)])).unwrap();
        assert_eq!(mv.h, vec![vec![c(1.0, 0.0)]]);
        assert_eq!(mv.min_eigen, 1.0);
    }

    #[test]
    fn conformal_metric() {
        let mdl = model(1, 1, "exp(z1*conj(z1))*u1*conj(u1)");
        let mv = metric(&mdl, &Point::new(vec![c(0.3, 0.4)], vec![c(1.0, 0.0)])).unwrap();
        assert!((mv.h[0][0] - c(1.2840254166877414, 0.0)).modulus() < 1e-15);
    }

    #[test]
    fn zero_fiber_is_rejected() {
        let mdl = model(1, 1, "u1*conj(u1)");
        let p = Point::new(vec![c(0.0, 0.0)], vec![c(0.0, 0.0)]);
        assert_eq!(metric(&mdl, &p), Err(GeometryError::NonzeroFiberRequired));
    }

    #[test]
    fn non_real_finsler_is_not_hermitian() {
        let mdl = model(1, 2, "u1*conj(u2)");
        let p = Point::new(vec![c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(metric(&mdl, &p), Err(GeometryError::NonHermitian { .. })));
    }

    #[test]
    fn degenerate_metric_is_singular() {
        let mdl = model(1, 2, "abs2(u1)");
        let p = Point::new(vec![c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(metric(&mdl, &p), Err(GeometryError::SingularMetric { .. })));
    }

    #[test]
    fn homogeneity_of_a_quadratic_form() {
        let mdl = model(1, 1, "exp(z1*conj(z1))*u1*conj(u1)");
        let p = Point::new(vec![c(0.3, 0.4)], vec![c(0.7, -0.2)]);
        let r = homogeneity_residuals(&mdl, &p).unwrap();
        assert_eq!(r.len(), 13);
        assert!(worst(&r) < 1e-14, "{r:?}");
    }

    #[test]
    fn quartic_term_breaks_scaling() {
        let mdl = model(1, 1, "abs2(u1) + u1*conj(u1)*u1*conj(u1)");
        let p = Point::new(vec![c(0.0, 0.0)], vec![c(1.0, 0.0)]);
        let r = homogeneity_residuals(&mdl, &p).unwrap();
        let s2 = r.iter().find(|x| x.name == "scaling.2+0i").unwrap();
        // F(2u) = 4 + 16 against 4 F(u) = 8
        assert!((s2.abs - 12.0).abs() < 1e-12);
        let names: Vec<String> = r.iter().map(|x| x.name.clone()).collect();
        assert!(names.contains(&"iv.dh_ubar".to_string()));
    }

    #[test]
    fn indefinite_metric_fails_convexity() {
        let mdl = model(1, 2, "abs2(u1) - 2*abs2(u2)");
        let pts = [Point::new(vec![c(0.0, 0.0)], vec![c(1.0, 0.0), c(0.5, 0.0)])];
        let cert = convexity_certificate(&mdl, &pts).unwrap();
        assert!(!cert.pass);
        assert!((cert.min_eigen + 2.0).abs() < 1e-12);
    }
}
