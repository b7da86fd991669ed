use alloc::vec::Vec;

use num_complex::Complex64;

use super::{Point, SlotLayout};
use crate::exprlang::{EvalError, Expr, VarSlot};

pub const FD_STEP: f64 = 1e-5;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Wirtinger partial of `f`, seen as a function on the manifold, by central
/// differences along the real and imaginary parts of the slot's coordinate.
///
/// Perturbing `z_k` also perturbs `z̄_k`, so unlike the symbolic engine the
/// slots are coupled here: `∂/∂z = ½(∂x − i∂y)`, `∂/∂z̄ = ½(∂x + i∂y)`.
pub fn fd_wirtinger<E, F>(f: F, p: &Point, slot: VarSlot, step: f64) -> Result<Complex64, E>
where
    F: Fn(&Point) -> Result<Complex64, E>,
{
    let re = Complex64::new(step, 0.0);
    let im = Complex64::new(0.0, step);
    let dx = (f(&p.shifted(slot, re))? - f(&p.shifted(slot, -re))?) / (2.0 * step);
    let dy = (f(&p.shifted(slot, im))? - f(&p.shifted(slot, -im))?) / (2.0 * step);
    Ok(if slot.kind.is_barred() { (dx + I * dy) * 0.5 } else { (dx - I * dy) * 0.5 })
}

pub fn fd_partial(e: &Expr, p: &Point, s: VarSlot, step: f64) -> Result<Complex64, EvalError> {
    fd_wirtinger(|q| e.evaluate(q), p, s, step)
}

/// All `2(n+m)` Wirtinger partials by finite differences, in layout order.
pub fn wirtinger_gradient_fd<E, F>(f: F, p: &Point, step: f64) -> Result<Vec<Complex64>, E>
where
    F: Fn(&Point) -> Result<Complex64, E>,
{
    let layout = SlotLayout::new(p.z.len(), p.u.len());
    let mut dx = Vec::with_capacity(layout.len() / 2);
    let mut dy = Vec::with_capacity(layout.len() / 2);
    // one real/imaginary pair per underlying coordinate, shared by the slot
    // and its conjugate
    for s in layout.slots().into_iter().filter(|s| !s.kind.is_barred()) {
        let re = Complex64::new(step, 0.0);
        let im = Complex64::new(0.0, step);
        dx.push((f(&p.shifted(s, re))? - f(&p.shifted(s, -re))?) / (2.0 * step));
        dy.push((f(&p.shifted(s, im))? - f(&p.shifted(s, -im))?) / (2.0 * step));
    }
    let (n, m) = (layout.n, layout.m);
    let mut out = Vec::with_capacity(layout.len());
    for k in 0..n {
        out.push((dx[k] - I * dy[k]) * 0.5);
    }
    for k in 0..n {
        out.push((dx[k] + I * dy[k]) * 0.5);
    }
    for a in 0..m {
        out.push((dx[n + a] - I * dy[n + a]) * 0.5);
    }
    for a in 0..m {
        out.push((dx[n + a] + I * dy[n + a]) * 0.5);
    }
    Ok(out)
}

/// Converts a vector field `Σ c_s ∂_s` given on Wirtinger slots into its
/// coefficients on the real directions `(x_1..x_n, y_1..y_n, a_1..a_m,
/// b_1..b_m)` where `z_k = x_k + i y_k`, `u_α = a_α + i b_α`.
pub fn wirtinger_to_real(layout: SlotLayout, c: &[Complex64]) -> Vec<Complex64> {
    let (n, m) = (layout.n, layout.m);
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); layout.len()];
    for k in 0..n {
        let (cz, czb) = (c[layout.z(k)], c[layout.zbar(k)]);
        out[k] = (cz + czb) * 0.5;
        out[n + k] = (czb - cz) * I * 0.5;
    }
    for a in 0..m {
        let (cu, cub) = (c[layout.u(a)], c[layout.ubar(a)]);
        out[2 * n + a] = (cu + cub) * 0.5;
        out[2 * n + m + a] = (cub - cu) * I * 0.5;
    }
    out
}

fn along(p: &Point, dir: &[f64], t: f64) -> Point {
    let n = p.z.len();
    let m = p.u.len();
    let mut q = p.clone();
    for k in 0..n {
        q.z[k] += Complex64::new(dir[k], dir[n + k]) * t;
    }
    for a in 0..m {
        q.u[a] += Complex64::new(dir[2 * n + a], dir[2 * n + m + a]) * t;
    }
    q
}

/// Derivative of `f` along a (possibly complex) combination `v` of the real
/// directions, as `D_{Re v} f + i D_{Im v} f` with central differences.
pub fn directional_fd<E, F>(f: F, p: &Point, v: &[Complex64], step: f64) -> Result<Complex64, E>
where
    F: Fn(&Point) -> Result<Complex64, E>,
{
    let re: Vec<f64> = v.iter().map(|c| c.re).collect();
    let im: Vec<f64> = v.iter().map(|c| c.im).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (dir, weight) in [(re, Complex64::new(1.0, 0.0)), (im, I)] {
        if dir.iter().all(|x| *x == 0.0) {
            continue;
        }
        let d = (f(&along(p, &dir, step))? - f(&along(p, &dir, -step))?) / (2.0 * step);
        total += weight * d;
    }
    Ok(total)
}

/// Directional derivative of an expression along real-direction
/// coefficients `v`, with the default step.
pub fn directional_oracle(f: &Expr, p: &Point, v: &[Complex64]) -> Result<Complex64, EvalError> {
    directional_fd(|q| f.evaluate(q), p, v, FD_STEP)
}
