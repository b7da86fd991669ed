//! Brackets, torsion and curvature of the adapted frame: closed forms
//! against definition-based oracles, plus frozen witness values.

mod common;

use common::*;
use finsler_core::calculus::sample_points;
use finsler_core::chernfinsler::{Depth, PointGeometry};
use finsler_core::exprlang::{parse, SlotContext};
use finsler_core::prolongation::*;
use finsler_core::verify::worst;
use finsler_core::{Complex64, GeometryError};

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn max_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn m2_point() -> finsler_core::Point {
    point(&[c(0.2, 0.1)], &[c(0.7, 0.2), c(-0.3, 0.5)])
}

#[test]
fn flat_model_has_no_geometry() {
    let model = m0();
    for p in sample_points(model.domain(), 1, 1, 42, 10) {
        let pr = Prolongation::compute(&model, &p).unwrap();
        for a in FrameVector::all(1) {
            for b in FrameVector::all(1) {
                assert!(max_norm(pr.brackets.get(a, b)) < 1e-15);
            }
        }
        assert!(pr.torsion.max_abs() < 1e-15);
        assert!(pr.torsion_general.max_abs() < 1e-15);
        assert!(pr.curvature.max_abs() < 1e-15);
    }
}

#[test]
fn bracket_table_is_exactly_antisymmetric_and_real() {
    for (name, model) in all() {
        let m = model.m();
        for p in sample_points(model.domain(), model.n(), m, 7, 3) {
            let pr = Prolongation::compute(&model, &p).unwrap();
            for a in FrameVector::all(m) {
                for b in FrameVector::all(m) {
                    let ab = pr.brackets.get(a, b);
                    let ba: Vec<_> = pr.brackets.get(b, a).iter().map(|x| -x).collect();
                    assert_eq!(ab, &ba[..], "{name} [{a},{b}]");
                    let conj = conj_coeffs(pr.brackets.get(a.conj(), b.conj()), m);
                    assert_eq!(ab, &conj[..], "{name} [{a},{b}]");
                }
            }
        }
    }
}

#[test]
fn m1_vertical_bracket() {
    let z = c(0.3, 0.4);
    let pr = Prolongation::compute(&m1(), &point(&[z], &[c(0.8, -0.1)])).unwrap();
    let br = pr.brackets.get(FrameVector::x(0), FrameVector::v(0));
    assert!(close(br[FrameVector::v(0).position(1)], z.conj(), 1e-14));
}

#[test]
fn m2_structure_bracket() {
    let pr = Prolongation::compute(&m2(), &m2_point()).unwrap();
    let br = pr.brackets.get(FrameVector::x(0), FrameVector::x(1));
    let mut expected = vec![c(0.0, 0.0); 8];
    expected[0] = c(1.0, 0.0);
    assert!(max_diff(br, &expected) < 1e-15, "{br:?}");
    // hT(X_1, X_2) = −X_1 since L = 0
    let t = pr.torsion.get(FrameVector::x(0), FrameVector::x(1));
    expected[0] = c(-1.0, 0.0);
    assert!(max_diff(t, &expected) < 1e-15, "{t:?}");
}

#[test]
fn brackets_match_commutator_oracle() {
    for (name, model) in all() {
        let m = model.m();
        let structured = name == "m2";
        for p in sample_points(model.domain(), model.n(), m, 11, 3) {
            let pr = Prolongation::compute(&model, &p).unwrap();
            let oracle = BracketOracle::new(&model, &p).unwrap();
            for a in FrameVector::all(m) {
                for b in FrameVector::all(m) {
                    let xx = a.kind.is_horizontal() && b.kind.is_horizontal() && a.kind == b.kind && a.index != b.index;
                    match oracle.bracket(a, b) {
                        Ok(v) => {
                            let d = max_diff(&v, pr.brackets.get(a, b));
                            assert!(d < 1e-6 * (1.0 + max_norm(&v)), "{name} [{a},{b}] {d:e}");
                        }
                        Err(GeometryError::IllConditionedProbe(_)) => assert!(structured && xx, "{name} [{a},{b}]"),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }
}

#[test]
fn m1_mixed_bracket_against_oracle() {
    let model = m1();
    let p = point(&[c(0.3, 0.4)], &[c(1.0, 0.0)]);
    let v = bracket_oracle(&model, &p, FrameVector::x(0), FrameVector::xbar(0)).unwrap();
    let pr = Prolongation::compute(&model, &p).unwrap();
    assert!(max_diff(&v, pr.brackets.get(FrameVector::x(0), FrameVector::xbar(0))) < 1e-6);
    // δ_1̄ N^1_1 = ∂_z̄ (z̄ u) = u
    assert!(close(v[FrameVector::v(0).position(1)], c(1.0, 0.0), 1e-6));
}

#[test]
fn torsion_matches_definition() {
    for (name, model) in all() {
        let m = model.m();
        for p in sample_points(model.domain(), model.n(), m, 5, 4) {
            let pr = Prolongation::compute(&model, &p).unwrap();
            for a in FrameVector::all(m) {
                for b in FrameVector::all(m) {
                    let def = torsion_from_definition(&pr.connection, &pr.brackets, a, b);
                    let d = max_diff(&def, pr.torsion_general.get(a, b));
                    assert!(d < 1e-12 * (1.0 + max_norm(&def)), "{name} T({a},{b})");
                    // the Chern-Finsler simplification rests on (L,N) and (C)
                    let d = max_diff(&def, pr.torsion.get(a, b));
                    assert!(d < 1e-10 * (1.0 + max_norm(&def)), "{name} T({a},{b}) specialized");
                }
            }
            for a in 0..m {
                for b in 0..m {
                    for (x, y) in [(FrameVector::v(a), FrameVector::v(b)), (FrameVector::v(a), FrameVector::vbar(b))] {
                        assert!(pr.torsion.get(x, y).iter().all(|c| *c == Complex64::new(0.0, 0.0)));
                    }
                }
            }
        }
    }
}

#[test]
fn curvature_matches_definition() {
    for (name, model) in all() {
        let m = model.m();
        for p in sample_points(model.domain(), model.n(), m, 9, 3) {
            let pr = Prolongation::compute(&model, &p).unwrap();
            for z in FrameVector::all(m) {
                for w in FrameVector::all(m) {
                    for v in FrameVector::all(m) {
                        let oracle = pr.curvature_oracle(z, w, v);
                        let table = pr.curvature.get(z, w, v);
                        let d = max_diff(&oracle, table);
                        let what = listing(z, w, v);
                        assert!(d < 1e-8 * (1.0 + max_norm(&oracle)), "{name} R({z},{w}){v} {what:?} {d:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn m1_curvature_witness() {
    let model = m1();
    for p in sample_points(model.domain(), 1, 1, 42, 5) {
        let pr = Prolongation::compute(&model, &p).unwrap();
        let (z, w, v) = (FrameVector::xbar(0), FrameVector::x(0), FrameVector::v(0));
        let r = pr.curvature.get(z, w, v)[FrameVector::v(0).position(1)];
        assert!(close(r, c(1.0, 0.0), 1e-12), "{r}");
        let o = pr.curvature_oracle(z, w, v)[FrameVector::v(0).position(1)];
        assert!(close(o, c(1.0, 0.0), 1e-12), "{o}");
    }
}

#[test]
fn m2_vertical_curvature_frozen() {
    let pr = Prolongation::compute(&m2(), &m2_point()).unwrap();
    let cases = [
        ((0, 0, 0), [c(-0.3267453311100057, 0.0), c(-0.08887404110868806, 0.3312577895869282)]),
        ((1, 1, 1), [c(-0.16478592390755478, -0.6142020800190678), c(-0.6675058328189967, 0.0)]),
        ((0, 1, 0), [c(-0.10571172477088421, 0.39401642869147746), c(0.370704556496132, 0.21434327561507122)]),
    ];
    for ((a, b, g), expected) in cases {
        let r = pr.curvature.get(FrameVector::v(a), FrameVector::vbar(b), FrameVector::v(g));
        for t in 0..2 {
            assert!(close(r[FrameVector::v(t).position(2)], expected[t], 1e-12), "{a}{b}{g}{t}: {r:?}");
        }
    }
}

#[test]
fn metric_compatibility() {
    for (name, model) in all() {
        for p in sample_points(model.domain(), model.n(), model.m(), 3, 10) {
            let pr = Prolongation::compute(&model, &p).unwrap();
            let r = metric_compatibility_residual(&pr.geometry, &pr.connection);
            assert!(worst(&r) < 1e-9, "{name}: {r:?}");
        }
    }
}

#[test]
fn kahler_classification() {
    for (name, model) in [("m0", m0()), ("m1", m1()), ("m3", m3())] {
        for p in sample_points(model.domain(), model.n(), model.m(), 4, 10) {
            let g = PointGeometry::compute(&model, &p, Depth::Values).unwrap();
            let k = kahler_residual(&g);
            assert!(k.iter().flatten().flatten().all(|x| x.norm() < 1e-12), "{name}");
        }
    }
    let p = point(&[c(1.0, 0.0), c(0.2, -0.4)], &[c(0.5, 0.0), c(0.2, 0.6)]);
    let g = PointGeometry::compute(&m4(), &p, Depth::Values).unwrap();
    let k = kahler_residual(&g);
    assert!(close(k[1][0][1], c(-0.5, 0.0), 1e-14));
    assert!(close(k[1][1][0], c(0.5, 0.0), 1e-14));
}

#[test]
fn horizontal_residual_vanishes_without_structure() {
    for (name, model) in [("m0", m0()), ("m1", m1()), ("m3", m3()), ("m4", m4())] {
        for p in sample_points(model.domain(), model.n(), model.m(), 6, 10) {
            let g = PointGeometry::compute(&model, &p, Depth::Full).unwrap();
            let h = horizontal_residual(&g);
            assert!(h.iter().flatten().flatten().all(|x| x.norm() < 1e-12), "{name}");
        }
    }
}

#[test]
fn spray_on_m1() {
    let z = c(0.3, 0.4);
    let u = c(0.6, -0.2);
    let g = PointGeometry::compute(&m1(), &point(&[z], &[u]), Depth::NOnly).unwrap();
    let s = spray_check(&g, None).unwrap();
    assert!(close(s.g[0], 0.5 * z.conj() * u * u, 1e-14));
    assert!(worst(&s.residuals()) < 1e-15);
    let zero = parse("0", SlotContext::full(1, 1)).unwrap();
    let s = spray_check(&g, Some(&[zero])).unwrap();
    assert!(close(s.consistency[0], -z.conj() * u * u, 1e-14));
    assert_eq!(s.t_spray, s.liouville);
}

#[test]
fn differential_decomposition_pairs_with_frame() {
    let ctx = SlotContext::full(1, 1);
    let z = c(0.3, 0.4);
    let u = c(0.6, -0.2);
    let g = PointGeometry::compute(&m1(), &point(&[z], &[u]), Depth::NOnly).unwrap();
    let f = parse("u1", ctx).unwrap();
    let d = differential_decomposition(&g, &f).unwrap();
    assert!(close(d.horizontal[0], -z.conj() * u, 1e-14));
    assert!(close(d.vertical[0], c(1.0, 0.0), 1e-15));
    for (name, model) in all() {
        for p in sample_points(model.domain(), model.n(), model.m(), 8, 3) {
            let g = PointGeometry::compute(&model, &p, Depth::NOnly).unwrap();
            let f = model.finsler().clone();
            let d = differential_decomposition(&g, &f).unwrap();
            assert!(worst(&[decomposition_residual(&g, &f, &d).unwrap()]) < 1e-6, "{name}");
            // pairing ∂^v F with the Liouville direction gives F
            let euler: Complex64 = d.vertical.iter().zip(&p.u).map(|(a, b)| a * b).sum();
            assert!(close(euler, f.evaluate(&p).unwrap(), 1e-12), "{name}");
        }
    }
}

/// On a model with z-dependent, non-Hermitian vertical geometry the triples
/// `R(X, V)X`, `R(X, V̄)X`, `R(X̄, V)X` are not zero: `D` preserves the
/// horizontal/vertical split with the same coefficients, so each mirrors
/// its listed `V`-target family. The fixtures all have these at zero.
#[test]
fn omitted_horizontal_targets_mirror_vertical_ones() {
    let src = finsler_core::ModelSource {
        n: 1,
        m: 2,
        rho: vec![vec!["1".into()], vec!["0".into()]],
        structure: vec![],
        finsler: "(1 + z1*conj(z1))*(abs2(u1) + abs2(u2)) + (z1 + conj(z1))*abs2(u1)*abs2(u2)/(abs2(u1) + abs2(u2))"
            .into(),
        z_box: None,
        u_annulus: None,
    };
    let model = finsler_core::AlgebroidModel::from_source(&src).unwrap();
    let p = sample_points(model.domain(), 1, 2, 1, 1).remove(0);
    let pr = Prolongation::compute(&model, &p).unwrap();
    let mut largest: f64 = 0.0;
    for (zk, wk) in [(FrameKind::X, FrameKind::V), (FrameKind::X, FrameKind::VBar), (FrameKind::XBar, FrameKind::V)] {
        for a in 0..2 {
            for b in 0..2 {
                for g in 0..2 {
                    let (z, w) = (FrameVector::new(zk, a), FrameVector::new(wk, b));
                    assert_eq!(listing(z, w, FrameVector::x(g)), Listing::AssertedZero);
                    let on_x = pr.curvature_oracle(z, w, FrameVector::x(g));
                    let on_v = pr.curvature.get(z, w, FrameVector::v(g));
                    for t in 0..2 {
                        let x = on_x[FrameVector::x(t).position(2)];
                        assert!((x - on_v[FrameVector::v(t).position(2)]).norm() < 1e-12);
                        largest = largest.max(x.norm());
                    }
                }
            }
        }
    }
    assert!(largest > 1e-2, "{largest}");
}
