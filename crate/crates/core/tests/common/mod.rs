#![allow(dead_code)]

use finsler_core::{AlgebroidModel, Complex64, ModelSource, Point, StructureEntry};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn point(z: &[Complex64], u: &[Complex64]) -> Point {
    Point::new(z.to_vec(), u.to_vec())
}

fn source(n: usize, m: usize, rho: &[&[&str]], structure: &[(usize, usize, usize, &str)], f: &str) -> ModelSource {
    ModelSource {
        n,
        m,
        rho: rho.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
        structure: structure
            .iter()
            .map(|&(alpha, beta, gamma, e)| StructureEntry { alpha, beta, gamma, expr: e.to_string() })
            .collect(),
        finsler: f.to_string(),
        z_box: None,
        u_annulus: None,
    }
}

pub fn m0() -> AlgebroidModel {
    AlgebroidModel::from_source(&source(1, 1, &[&["1"]], &[], "u1*conj(u1)")).unwrap()
}

pub fn m1() -> AlgebroidModel {
    AlgebroidModel::from_source(&source(1, 1, &[&["1"]], &[], "exp(z1*conj(z1))*u1*conj(u1)")).unwrap()
}

pub fn m2() -> AlgebroidModel {
    AlgebroidModel::from_source(&source(
        1,
        2,
        &[&["1"], &["z1"]],
        &[(1, 2, 1, "1")],
        "abs2(u1) + abs2(u2) + abs2(u1)*abs2(u2)/(abs2(u1) + abs2(u2))",
    ))
    .unwrap()
}

pub fn m3() -> AlgebroidModel {
    AlgebroidModel::from_source(&source(
        2,
        2,
        &[&["1", "0"], &["0", "1"]],
        &[],
        "(1 + z2*conj(z2))*abs2(u1) + (1 + z1*conj(z1))*abs2(u2) + conj(z1)*z2*u1*conj(u2) + z1*conj(z2)*u2*conj(u1)",
    ))
    .unwrap()
}

pub fn m4() -> AlgebroidModel {
    AlgebroidModel::from_source(&source(
        2,
        2,
        &[&["1", "0"], &["0", "1"]],
        &[],
        "abs2(u1) + (1 + z1*conj(z1))*abs2(u2)",
    ))
    .unwrap()
}

pub fn all() -> Vec<(&'static str, AlgebroidModel)> {
    vec![("m0", m0()), ("m1", m1()), ("m2", m2()), ("m3", m3()), ("m4", m4())]
}

pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}
