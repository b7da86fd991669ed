use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{worst, Residual};
use crate::algebroid::AlgebroidModel;
use crate::calculus::{fd_wirtinger, sample_points, Point, FD_STEP};
use crate::chernfinsler::{connection_identity_residuals, default_frame_change, Depth, FrameChange, PointGeometry};
use crate::error::GeometryError;
use crate::exprlang::VarSlot;
use crate::finsler::homogeneity_residuals;
use crate::prolongation::{
    decomposition_residual, differential_decomposition, horizontal_residual, kahler_residual,
    metric_compatibility_residual, spray_check, torsion_from_definition, BracketOracle, FrameVector, Prolongation,
};
use crate::fmath::ComplexMath;

/// Tolerance floor for checks whose reference side is a finite difference.
pub const FD_TOLERANCE: f64 = 1e-6;

/// One verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    Homogeneity,
    ConnectionIdentities,
    FrameChange,
    BracketsOracle,
    Torsion,
    CurvatureOracle,
    MetricCompatibility,
    Horizontal,
    Kahler,
    Convexity,
    JetsFd,
    Spray,
    Decomposition,
}

impl CheckKind {
    /// The suites `check` runs when none are named.
    pub const DEFAULT: [CheckKind; 9] = [
        CheckKind::Homogeneity,
        CheckKind::ConnectionIdentities,
        CheckKind::FrameChange,
        CheckKind::BracketsOracle,
        CheckKind::Torsion,
        CheckKind::CurvatureOracle,
        CheckKind::MetricCompatibility,
        CheckKind::Horizontal,
        CheckKind::Kahler,
    ];

    pub const EXTRA: [CheckKind; 4] =
        [CheckKind::Convexity, CheckKind::JetsFd, CheckKind::Spray, CheckKind::Decomposition];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Homogeneity => "homogeneity",
            CheckKind::ConnectionIdentities => "connection_identities",
            CheckKind::FrameChange => "frame_change",
            CheckKind::BracketsOracle => "brackets_oracle",
            CheckKind::Torsion => "torsion",
            CheckKind::CurvatureOracle => "curvature_oracle",
            CheckKind::MetricCompatibility => "metric_compatibility",
            CheckKind::Horizontal => "horizontal",
            CheckKind::Kahler => "kahler",
            CheckKind::Convexity => "convexity",
            CheckKind::JetsFd => "jets_fd",
            CheckKind::Spray => "spray",
            CheckKind::Decomposition => "decomposition",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::DEFAULT.iter().chain(Self::EXTRA.iter()).copied().find(|k| k.name() == s)
    }

    /// Finite-difference checks cannot resolve below [`FD_TOLERANCE`].
    pub fn tolerance(self, tol: f64) -> f64 {
        match self {
            CheckKind::BracketsOracle | CheckKind::JetsFd | CheckKind::Decomposition => tol.max(FD_TOLERANCE),
            _ => tol,
        }
    }

    fn needs_full(self) -> bool {
        !matches!(self, CheckKind::Homogeneity | CheckKind::FrameChange | CheckKind::Convexity)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { points: 100, seed: 42, tol: 1e-8 }
    }
}

/// Aggregate of one suite over the sample.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub kind: CheckKind,
    pub max: f64,
    pub mean: f64,
    pub worst_point: Option<Point>,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

struct Accumulator {
    kind: CheckKind,
    values: Vec<f64>,
    max: f64,
    worst: Option<Point>,
    error: Option<String>,
    note: Option<String>,
}

impl Accumulator {
    fn new(kind: CheckKind) -> Self {
        Self { kind, values: Vec::new(), max: 0.0, worst: None, error: None, note: None }
    }

    fn push(&mut self, p: &Point, r: Result<f64, GeometryError>) {
        match r {
            Ok(v) => {
                let nan = v.is_nan();
                if self.worst.is_none() || nan || (!self.max.is_nan() && v > self.max) {
                    self.max = v;
                    self.worst = Some(p.clone());
                }
                self.values.push(v);
            }
            Err(e) => {
                if self.error.is_none() {
                    self.error = Some(format!("{e}"));
                    self.max = f64::NAN;
                    self.worst = Some(p.clone());
                }
            }
        }
    }

    fn finish(self, tol: f64) -> CheckResult {
        let tolerance = self.kind.tolerance(tol);
        let mean = if self.values.is_empty() { 0.0 } else { self.values.iter().sum::<f64>() / self.values.len() as f64 };
        let pass = self.error.is_none() && self.max <= tolerance;
        let note = match (self.error, self.note) {
            (Some(e), _) => Some(e),
            (None, n) => n,
        };
        CheckResult { kind: self.kind, max: self.max, mean, worst_point: self.worst, tolerance, pass, note }
    }
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> (f64, f64) {
    let d = a.iter().zip(b).map(|(x, y)| (x - y).modulus()).fold(0.0, f64::max);
    let s = a.iter().chain(b).map(|x| x.modulus()).fold(0.0, f64::max);
    (d, s)
}

fn has_structure(model: &AlgebroidModel) -> bool {
    model.structure_exprs().iter().flatten().flatten().any(|e| !e.is_zero())
}

/// `[A, B]` closed form against the commutator oracle. Pairs whose
/// horizontal part the anchor cannot resolve are skipped and counted.
fn brackets_residual(model: &AlgebroidModel, pr: &Prolongation, skipped: &mut usize) -> Result<f64, GeometryError> {
    let oracle = BracketOracle::new(model, &pr.geometry.point)?;
    let mut r = Residual::new("brackets");
    for a in FrameVector::all(pr.m()) {
        for b in FrameVector::all(pr.m()) {
            match oracle.bracket(a, b) {
                Ok(v) => {
                    let (d, s) = max_diff(&v, pr.brackets.get(a, b));
                    r.record(d, s);
                }
                Err(GeometryError::IllConditionedProbe(_)) => *skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(r.normalized())
}

fn torsion_residual(pr: &Prolongation) -> f64 {
    let m = pr.m();
    let mut general = Residual::new("torsion.general");
    let mut special = Residual::new("torsion.specialized");
    for a in FrameVector::all(m) {
        for b in FrameVector::all(m) {
            let def = torsion_from_definition(&pr.connection, &pr.brackets, a, b);
            let (d, s) = max_diff(&def, pr.torsion_general.get(a, b));
            general.record(d, s);
            let (d, s) = max_diff(&def, pr.torsion.get(a, b));
            special.record(d, s);
        }
    }
    worst(&[general, special])
}

fn curvature_residual(pr: &Prolongation) -> f64 {
    let all = FrameVector::all(pr.m());
    let mut r = Residual::new("curvature");
    for &z in &all {
        for &w in &all {
            for &v in &all {
                let (d, s) = max_diff(&pr.curvature_oracle(z, w, v), pr.curvature.get(z, w, v));
                r.record(d, s);
            }
        }
    }
    r.normalized()
}

/// `H + 𝒞N`, the full vertical part of `[δ_α, δ_β]`; equal to `H` when the
/// structure functions vanish.
fn horizontal_check(g: &PointGeometry) -> f64 {
    let m = g.m();
    let h = horizontal_residual(g);
    let mut r = Residual::new("horizontal");
    for s in 0..m {
        for a in 0..m {
            for b in 0..m {
                let cn: Complex64 = (0..m).map(|e| g.structure[a][b][e] * g.n[s][e].value).sum();
                r.zero(h[s][a][b] + cn, g.scale());
            }
        }
    }
    r.normalized()
}

fn kahler_check(g: &PointGeometry) -> f64 {
    let mut r = Residual::new("kahler");
    for v in kahler_residual(g).iter().flatten().flatten() {
        r.zero(*v, g.scale());
    }
    r.normalized()
}

/// Symbolic jets against central differences: every partial of `F` of
/// order 1 and 2 (differencing the symbolic partial one order lower) and
/// the gradients of `N` and `L`.
pub fn jets_residual(model: &AlgebroidModel, pr: &Prolongation) -> Result<f64, GeometryError> {
    let p = &pr.geometry.point;
    let layout = model.layout();
    let d = model.finsler_derivatives();
    let mut fj = Residual::new("jets.F");
    for s in layout.slots() {
        let exact = d.value(&[s], p)?;
        let fd = fd_wirtinger(|q| d.value(&[], q), p, s, FD_STEP)?;
        fj.pair(exact, fd);
        for t in layout.slots() {
            let exact = d.value(&[s, t], p)?;
            let fd = fd_wirtinger(|q| d.value(&[s], q), p, t, FD_STEP)?;
            fj.pair(exact, fd);
        }
    }

    // one pair of shifted geometries per real direction serves every entry
    let (n, m) = (model.n(), model.m());
    let mut dirs: Vec<(VarSlot, [PointGeometry; 4])> = Vec::new();
    let coords = (0..n).map(|k| VarSlot::z(k + 1)).chain((0..m).map(|a| VarSlot::u(a + 1)));
    for s in coords {
        let at = |delta: Complex64| PointGeometry::compute(model, &p.shifted(s, delta), Depth::Values);
        let h = FD_STEP;
        dirs.push((
            s,
            [
                at(Complex64::new(h, 0.0))?,
                at(Complex64::new(-h, 0.0))?,
                at(Complex64::new(0.0, h))?,
                at(Complex64::new(0.0, -h))?,
            ],
        ));
    }
    let g = &pr.geometry;
    let mut nl = Residual::new("jets.N,L");
    let i = Complex64::new(0.0, 1.0);
    let mut compare = |exact: &crate::calculus::Grad, pick: &dyn Fn(&PointGeometry) -> Complex64| {
        for (s, [xp, xm, yp, ym]) in &dirs {
            let dx = (pick(xp) - pick(xm)) / (2.0 * FD_STEP);
            let dy = (pick(yp) - pick(ym)) / (2.0 * FD_STEP);
            let idx = layout.index(*s);
            nl.pair(exact.d(idx), (dx - i * dy) * 0.5);
            nl.pair(exact.d(layout.conj_index(idx)), (dx + i * dy) * 0.5);
        }
    };
    for b in 0..m {
        for a in 0..m {
            compare(&g.n[b][a], &|q| q.n[b][a].value);
            for c in 0..m {
                compare(&g.l[b][a][c], &|q| q.l[b][a][c].value);
            }
        }
    }
    Ok(worst(&[fj, nl]))
}

/// Runs the selected suites over `opts.points` seeded points of the model's
/// domain. The Chern-Finsler geometry is built once per point and shared;
/// a geometry error fails the suites that needed it.
pub fn run_checks(model: &AlgebroidModel, kinds: &[CheckKind], opts: &CheckOptions) -> Vec<CheckResult> {
    let points = sample_points(model.domain(), model.n(), model.m(), opts.seed, opts.points);
    run_checks_at(model, kinds, &points, opts.tol)
}

pub fn run_checks_at(model: &AlgebroidModel, kinds: &[CheckKind], points: &[Point], tol: f64) -> Vec<CheckResult> {
    let mut acc: Vec<Accumulator> = kinds.iter().map(|&k| Accumulator::new(k)).collect();
    let frame = kinds
        .contains(&CheckKind::FrameChange)
        .then(|| FrameChange::new(model, default_frame_change(model.m())).map_err(|e| format!("{e}")));
    let structured = has_structure(model);
    let mut skipped = 0usize;
    let mut min_eigen = f64::INFINITY;

    for p in points {
        let full = if kinds.iter().any(|k| k.needs_full()) { Some(Prolongation::compute(model, p)) } else { None };
        for a in acc.iter_mut() {
            let pr = || full.as_ref().expect("full geometry requested").as_ref().map_err(Clone::clone);
            let r: Result<f64, GeometryError> = match a.kind {
                CheckKind::Homogeneity => homogeneity_residuals(model, p).map(|r| worst(&r)),
                CheckKind::ConnectionIdentities => {
                    pr().and_then(|pr| connection_identity_residuals(model, &pr.geometry).map(|r| worst(&r)))
                }
                CheckKind::FrameChange => match frame.as_ref().expect("frame change built") {
                    Ok(fc) => fc.check(model, p).map(|r| worst(&r)),
                    Err(e) => Err(GeometryError::InvalidFrame(e.clone())),
                },
                CheckKind::BracketsOracle => pr().and_then(|pr| brackets_residual(model, pr, &mut skipped)),
                CheckKind::Torsion => pr().map(torsion_residual),
                CheckKind::CurvatureOracle => pr().map(curvature_residual),
                CheckKind::MetricCompatibility => {
                    pr().map(|pr| worst(&metric_compatibility_residual(&pr.geometry, &pr.connection)))
                }
                CheckKind::Horizontal => pr().map(|pr| horizontal_check(&pr.geometry)),
                CheckKind::Kahler => pr().map(|pr| kahler_check(&pr.geometry)),
                CheckKind::Convexity => crate::finsler::metric(model, p).map(|mv| {
                    min_eigen = min_eigen.min(mv.min_eigen);
                    if mv.min_eigen > 0.0 { 0.0 } else { -mv.min_eigen + f64::MIN_POSITIVE }
                }),
                CheckKind::JetsFd => pr().and_then(|pr| jets_residual(model, pr)),
                CheckKind::Spray => pr().and_then(|pr| spray_check(&pr.geometry, None).map(|s| worst(&s.residuals()))),
                CheckKind::Decomposition => pr().and_then(|pr| {
                    let f = model.finsler();
                    let d = differential_decomposition(&pr.geometry, f)?;
                    decomposition_residual(&pr.geometry, f, &d).map(|r| r.normalized())
                }),
            };
            a.push(p, r);
        }
    }

    for a in acc.iter_mut() {
        a.note = match a.kind {
            CheckKind::BracketsOracle if skipped > 0 => Some(format!(
                "{skipped} X-X pairs skipped: their horizontal part lies outside the anchor image"
            )),
            CheckKind::Horizontal if structured => {
                Some(String::from("nonzero structure functions: residual is H + CN, the full vertical part"))
            }
            CheckKind::Spray => Some(String::from("default spray G = N u / 2 (convention)")),
            CheckKind::Convexity if min_eigen.is_finite() => Some(format!("min eigenvalue {min_eigen:.6e}")),
            _ => None,
        };
    }
    acc.into_iter().map(|a| a.finish(tol)).collect()
}

/// Overall verdict: every enabled suite passed.
pub fn overall(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.pass)
}
