//! Property tests for the calculus and for the algebraic invariants of the
//! geometry tables.

mod common;

use common::*;
use finsler_core::algebroid::Section;
use finsler_core::calculus::{fd_partial, FD_STEP};
use finsler_core::chernfinsler::{Depth, PointGeometry};
use finsler_core::prolongation::{FrameVector, Prolongation};
use finsler_core::{Complex64, Expr, Point, SlotLayout, VarSlot};
use proptest::prelude::*;

const N: usize = 2;
const M: usize = 2;

fn slot_strategy(holomorphic: bool) -> impl Strategy<Value = VarSlot> {
    let layout = SlotLayout::new(N, M);
    (0..layout.len()).prop_map(move |i| layout.slot(i)).prop_filter("holomorphic slot", move |s| {
        !holomorphic || !s.kind.is_barred()
    })
}

fn expr_strategy(holomorphic: bool) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        slot_strategy(holomorphic).prop_map(Expr::var),
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Expr::constant(Complex64::new(re, im))),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let mut ops = vec![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)).boxed(),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)).boxed(),
            inner.clone().prop_map(|a| Expr::exp(Expr::mul(Expr::real(0.3), a))).boxed(),
            (inner.clone(), 0..3i32).prop_map(|(a, k)| Expr::pow_int(a, k)).boxed(),
        ];
        if !holomorphic {
            ops.push(inner.prop_map(Expr::conj_node).boxed());
        }
        proptest::strategy::Union::new(ops)
    })
}

fn point_strategy() -> impl Strategy<Value = Point> {
    let c = || (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im));
    (proptest::collection::vec(c(), N), proptest::collection::vec(c(), M)).prop_map(|(z, u)| Point::new(z, u))
}

fn near(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_duality(f in expr_strategy(false), s in slot_strategy(false), p in point_strategy()) {
        // ∂_s̄ conj(f) = conj(∂_s f)
        let lhs = f.conjugate().differentiate(s.conjugate()).evaluate(&p).unwrap();
        let rhs = f.differentiate(s).evaluate(&p).unwrap().conj();
        prop_assert!(near(lhs, rhs, 1e-12), "{lhs} vs {rhs}");
    }

    #[test]
    fn mixed_partials_commute(f in expr_strategy(false), s in slot_strategy(false), t in slot_strategy(false), p in point_strategy()) {
        let st = f.differentiate(s).differentiate(t).evaluate(&p).unwrap();
        let ts = f.differentiate(t).differentiate(s).evaluate(&p).unwrap();
        prop_assert!(near(st, ts, 1e-12), "{st} vs {ts}");
    }

    #[test]
    fn holomorphic_expressions_have_no_antiholomorphic_derivative(f in expr_strategy(true), s in slot_strategy(true), p in point_strategy()) {
        let d = f.differentiate(s.conjugate());
        prop_assert!(d.is_zero() || d.evaluate(&p).unwrap().norm() == 0.0);
    }

    #[test]
    fn symbolic_partials_match_finite_differences(f in expr_strategy(false), s in slot_strategy(false), p in point_strategy()) {
        let exact = f.differentiate(s).evaluate(&p).unwrap();
        let fd = fd_partial(&f, &p, s, FD_STEP).unwrap();
        prop_assert!(near(exact, fd, 1e-6), "{exact} vs {fd}");
    }

    #[test]
    fn section_bracket_leibniz(a in proptest::collection::vec(-1.0..1.0f64, 6), s1 in 0..2usize, s2 in 0..2usize, z in (-1.0..1.0f64, -1.0..1.0f64)) {
        // f = a0 + a1 z + a2 z² with complex coefficients
        let model = m2();
        let zv = Expr::var(VarSlot::z(1));
        let coef = |i: usize| Expr::constant(Complex64::new(a[2 * i], a[2 * i + 1]));
        let f = Expr::sum([coef(0), Expr::mul(coef(1), zv.clone()), Expr::mul(coef(2), Expr::pow_int(zv, 2))]);
        let e1 = Section::basis(2, s1);
        let e2 = Section::basis(2, s2);
        let zc = [Complex64::new(z.0, z.1)];
        let lhs = model.bracket_sections(&e1, &e2.scaled(&f)).evaluate(&zc).unwrap();
        let base = model.bracket_sections(&e1, &e2).evaluate(&zc).unwrap();
        let p = Point::new(zc.to_vec(), vec![]);
        let fv = f.evaluate(&p).unwrap();
        let rho_f: Complex64 = model.anchor_of(&e1, &zc).unwrap()[0] * f.differentiate(VarSlot::z(1)).evaluate(&p).unwrap();
        let e2v = e2.evaluate(&zc).unwrap();
        for g in 0..2 {
            let rhs = fv * base[g] + rho_f * e2v[g];
            prop_assert!(near(lhs[g], rhs, 1e-9), "{} vs {rhs}", lhs[g]);
        }
    }

    #[test]
    fn curvature_table_is_antisymmetric_and_real(p in point_strategy().prop_filter("fiber away from 0", |p| p.fiber_norm() > 0.3)) {
        let pr = Prolongation::compute(&m3(), &p).unwrap();
        let all = FrameVector::all(2);
        for &z in &all {
            for &w in &all {
                for &v in &all {
                    let a = pr.curvature.get(z, w, v);
                    let b = pr.curvature.get(w, z, v);
                    let c = finsler_core::prolongation::conj_coeffs(pr.curvature.get(z.conj(), w.conj(), v.conj()), 2);
                    for i in 0..a.len() {
                        prop_assert!(near(a[i], -b[i], 1e-12));
                        prop_assert!(near(a[i], c[i], 1e-12));
                    }
                }
            }
        }
    }

    #[test]
    fn nonlinear_connection_is_fiber_homogeneous(p in point_strategy().prop_filter("fiber away from 0", |p| p.fiber_norm() > 0.3),
                                                re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let lambda = Complex64::new(re, im);
        prop_assume!(lambda.norm() > 0.1);
        for model in [m2(), m3(), m4()] {
            let mut p = p.clone();
            p.z.truncate(model.n());
            let g = PointGeometry::compute(&model, &p, Depth::Values).unwrap();
            let s = PointGeometry::compute(&model, &p.scale_fiber(lambda), Depth::Values).unwrap();
            for b in 0..2 {
                for a in 0..2 {
                    prop_assert!(near(s.n[b][a].value, lambda * g.n[b][a].value, 1e-10));
                    for c in 0..2 {
                        // L is fiber-homogeneous of degree 0, C of degree −1
                        prop_assert!(near(s.l[b][a][c].value, g.l[b][a][c].value, 1e-10));
                        prop_assert!(near(s.c[b][a][c].value * lambda, g.c[b][a][c].value, 1e-10));
                    }
                }
            }
        }
    }

    #[test]
    fn metric_is_hermitian(p in point_strategy().prop_filter("fiber away from 0", |p| p.fiber_norm() > 0.3)) {
        for (_, model) in all() {
            let m = model.m();
            let mut q = p.clone();
            q.z.truncate(model.n());
            q.u.truncate(m);
            prop_assume!(q.fiber_norm() > 0.1);
            let h = model.metric_tensor(&q).unwrap();
            for a in 0..m {
                for b in 0..m {
                    prop_assert!(near(h[a][b], h[b][a].conj(), 1e-13));
                }
            }
        }
    }
}
