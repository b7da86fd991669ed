//! The acceptance gate: each criterion at its stated tolerance, one
//! PASS/FAIL line apiece on stdout.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use finsler_cli::files::parse_model;
use finsler_core::calculus::sample_points;
use finsler_core::chernfinsler::FrameChange;
use finsler_core::prolongation::{kahler_residual, listing, FrameVector, Listing, Prolongation};
use finsler_core::verify::{run_checks, worst, CheckKind, CheckOptions, CheckResult};
use finsler_core::{AlgebroidModel, Complex64, Expr, Point, VarSlot};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(name: &str) -> AlgebroidModel {
    let src = parse_model(&std::fs::read(fixture(name)).unwrap()).unwrap();
    AlgebroidModel::from_source(&src).unwrap()
}

fn points(m: &AlgebroidModel, count: usize) -> Vec<Point> {
    sample_points(m.domain(), m.n(), m.m(), 42, count)
}

fn suite(m: &AlgebroidModel, kind: CheckKind, count: usize, tol: f64) -> CheckResult {
    run_checks(m, &[kind], &CheckOptions { points: count, seed: 42, tol }).remove(0)
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

/// `kind` on the named fixtures; the detail lists each maximum.
fn suite_on(names: &[&str], kind: CheckKind, count: usize, tol: f64) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for &name in names {
        let r = suite(&model(name), kind, count, tol);
        pass &= r.pass && r.max < tol.max(r.tolerance);
        parts.push(format!("{name} {:.1e}", r.max));
    }
    Outcome::new(pass, parts.join(", "))
}

fn max_abs<'a>(it: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    it.into_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn flat_model() -> Outcome {
    let start = Instant::now();
    let m0 = model("m0");
    let mut worst_entry: f64 = 0.0;
    for p in points(&m0, 50) {
        let pr = Prolongation::compute(&m0, &p).unwrap();
        let g = &pr.geometry;
        worst_entry = worst_entry
            .max(max_abs(g.n.iter().flatten().map(|x| &x.value)))
            .max(max_abs(g.l.iter().flatten().flatten().map(|x| &x.value)))
            .max(max_abs(g.c.iter().flatten().flatten().map(|x| &x.value)))
            .max(max_abs(pr.brackets.r.iter().flatten().flatten()))
            .max(pr.torsion.max_abs())
            .max(pr.torsion_general.max_abs())
            .max(pr.curvature.max_abs())
            .max(max_abs(kahler_residual(g).iter().flatten().flatten()));
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst_entry < 1e-12 && elapsed < Duration::from_secs(5),
        format!("max |entry| {worst_entry:.1e} at 50 points in {:.2}s", elapsed.as_secs_f64()),
    )
}

fn curvature() -> Outcome {
    let mut listed: f64 = 0.0;
    let mut unlisted: f64 = 0.0;
    for name in FIXTURES {
        let md = model(name);
        for p in points(&md, 20) {
            let pr = Prolongation::compute(&md, &p).unwrap();
            let scale = 1.0 + pr.geometry.scale();
            let all = FrameVector::all(pr.m());
            for &z in &all {
                for &w in &all {
                    for &v in &all {
                        let oracle = pr.curvature_oracle(z, w, v);
                        match listing(z, w, v) {
                            Listing::AssertedZero => unlisted = unlisted.max(max_abs(&oracle) / scale),
                            _ => {
                                let table = pr.curvature.get(z, w, v);
                                let d = oracle.iter().zip(table).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                                listed = listed.max(d / scale);
                            }
                        }
                    }
                }
            }
        }
    }
    let m1 = model("m1");
    let (xbar, x, v) = (FrameVector::xbar(0), FrameVector::x(0), FrameVector::v(0));
    let mut witness: f64 = 0.0;
    for p in points(&m1, 20) {
        let pr = Prolongation::compute(&m1, &p).unwrap();
        let coeff = pr.curvature.get(xbar, x, v)[v.position(1)];
        witness = witness.max((coeff - Complex64::new(1.0, 0.0)).norm());
    }
    Outcome::new(
        listed < 1e-8 && unlisted < 1e-8 && witness < 1e-8,
        format!("listed vs oracle {listed:.1e}, unlisted {unlisted:.1e}, M1 |R(X1bar,X1)V1 - 1| {witness:.1e}"),
    )
}

fn frame_change() -> Outcome {
    let m1 = model("m1");
    let exp = FrameChange::new(&m1, vec![vec![Expr::exp(Expr::var(VarSlot::z(1)))]]).unwrap();
    let r1 = points(&m1, 20).iter().map(|p| worst(&exp.check(&m1, p).unwrap())).fold(0.0, f64::max);

    let m2 = model("m2");
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let matrix = loop {
        let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let a = [[c(), c()], [c(), c()]];
        if (a[0][0] * a[1][1] - a[0][1] * a[1][0]).norm() > 0.1 {
            break a;
        }
    };
    let exprs = matrix.iter().map(|r| r.iter().map(|&c| Expr::constant(c)).collect()).collect();
    let constant = FrameChange::new(&m2, exprs).unwrap();
    let r2 = points(&m2, 20).iter().map(|p| worst(&constant.check(&m2, p).unwrap())).fold(0.0, f64::max);
    Outcome::new(r1 < 1e-8 && r2 < 1e-8, format!("M1 exp(z1) {r1:.1e}, M2 constant {r2:.1e}"))
}

fn kahler() -> Outcome {
    let m3 = suite(&model("m3"), CheckKind::Kahler, 100, 1e-8);
    let m4 = model("m4");
    let k212 = points(&m4, 100)
        .iter()
        .map(|p| kahler_residual(&Prolongation::compute(&m4, p).unwrap().geometry)[1][0][1].norm())
        .fold(0.0, f64::max);
    let at = Point::new(
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, -0.2)],
        vec![Complex64::new(0.6, 0.1), Complex64::new(-0.4, 0.8)],
    );
    let hand = kahler_residual(&Prolongation::compute(&m4, &at).unwrap().geometry)[1][0][1];
    let dev = (hand - Complex64::new(-0.5, 0.0)).norm();
    Outcome::new(
        m3.pass && m3.max < 1e-8 && k212 >= 0.1 && dev < 1e-8,
        format!("M3 {:.1e}, M4 max |K^2_12| {k212:.3}, K^2_12 at z1 = 1 off -1/2 by {dev:.1e}", m3.max),
    )
}

fn cli_suite() -> Outcome {
    let run = |tag: &str| {
        let start = Instant::now();
        let reports: Vec<Vec<u8>> = FIXTURES
            .iter()
            .map(|name| {
                let out = scratch(&format!("acceptance_{tag}_{name}.json"));
                let o = finsler(&["check", fixture(name).to_str().unwrap(), "--out", out.to_str().unwrap()]);
                assert!(matches!(o.status.code(), Some(0 | 1)), "{name}: {}", stderr(&o));
                std::fs::read(out).unwrap()
            })
            .collect();
        (reports, start.elapsed())
    };
    let (first, t1) = run("a");
    let (second, t2) = run("b");
    let identical = first == second;
    let slowest = t1.max(t2);
    Outcome::new(
        identical && slowest < Duration::from_secs(60),
        format!(
            "5 fixtures x 100 points, reports {}, slowest run {:.1}s",
            if identical { "byte-identical" } else { "DIFFER" },
            slowest.as_secs_f64()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: Vec<Criterion> = vec![
        ("flat model M0: every tensor vanishes, < 5 s", flat_model),
        ("homogeneity suite < 1e-9", || suite_on(&["m0", "m1", "m2", "m3", "m4"], CheckKind::Homogeneity, 100, 1e-9)),
        ("connection identities < 1e-9", || {
            suite_on(&["m0", "m1", "m2", "m3", "m4"], CheckKind::ConnectionIdentities, 100, 1e-9)
        }),
        ("symbolic jets vs finite differences, 1e-6", || {
            suite_on(&["m0", "m1", "m2", "m3", "m4"], CheckKind::JetsFd, 20, 1e-6)
        }),
        ("bracket closed forms vs commutator oracle, 1e-6", brackets),
        ("horizontal residual < 1e-8 on M0, M1, M3, M4", || {
            suite_on(&["m0", "m1", "m3", "m4"], CheckKind::Horizontal, 100, 1e-8)
        }),
        ("curvature table vs definition, 1e-8", curvature),
        ("frame-change laws < 1e-8", frame_change),
        ("Kahler classification", kahler),
        ("metric compatibility < 1e-9", || {
            suite_on(&["m0", "m1", "m2", "m3", "m4"], CheckKind::MetricCompatibility, 100, 1e-9)
        }),
        ("full CLI suite deterministic, < 60 s", cli_suite),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        // written to the raw handle so the lines show without --nocapture
        let _ = writeln!(
            stdout,
            "criterion {:>2} {}  {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

fn brackets() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in FIXTURES {
        let r = suite(&model(name), CheckKind::BracketsOracle, 20, 1e-6);
        // every pair is compared except the X-X pairs of M2
        let skipped = r.note.is_some();
        pass &= r.pass && r.max < 1e-6 && skipped == (name == "m2");
        parts.push(format!("{name} {:.1e}{}", r.max, if skipped { " (X-X skipped)" } else { "" }));
    }
    Outcome::new(pass, parts.join(", "))
}
