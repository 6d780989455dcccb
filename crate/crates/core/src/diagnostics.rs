//! Executable checks of the qualitative heat-flow facts.
//!
//! Each verifier returns a [`VerificationReport`] value instead of failing
//! fast, so callers (tests, the CLI) can print every witness.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{FiniteDomain, GraphOracle, PathMetric, VertexId};
use crate::heat::{evolve, finite_kernel, run_exhaustion, FiniteKernel};
use crate::operators::{
    adjacency_apply, coboundary, dirichlet_matrix, dirichlet_matrix_by_probe, edge_inner, laplacian_apply,
    valence_apply, VertexFunction,
};
use crate::{HeatError, Result};

/// Tolerance of the parabolic maximum principle check.
pub const PARABOLIC_TOL: f64 = 1e-9;
/// Relative tolerance of the exact-arithmetic operator identities.
pub const IDENTITY_TOL: f64 = 1e-12;
/// Number of interior samples of the parabolic time grid (plus both ends).
pub const PARABOLIC_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// The hypothesis of the checked statement does not hold for the input.
    NotApplicable,
}

/// One counterexample, with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub trial: usize,
    pub vertex: Option<VertexId>,
    pub time: Option<f64>,
    pub value: f64,
    pub bound: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub trials: usize,
    pub outcome: Outcome,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
    /// Largest `value - bound` seen over all trials (negative means slack).
    pub worst_margin: f64,
}

impl VerificationReport {
    fn new(check: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            trials: 0,
            outcome: Outcome::Pass,
            violations: Vec::new(),
            notes: Vec::new(),
            worst_margin: f64::NEG_INFINITY,
        }
    }

    fn record(&mut self, trial: usize, value: f64, bound: f64, witness: impl FnOnce() -> Violation) {
        self.worst_margin = self.worst_margin.max(value - bound);
        if !(value <= bound) {
            let mut v = witness();
            v.trial = trial;
            v.value = value;
            v.bound = bound;
            self.violations.push(v);
            self.outcome = Outcome::Fail;
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

fn witness(vertex: Option<VertexId>, time: Option<f64>, message: impl Into<String>) -> Violation {
    Violation {
        trial: 0,
        vertex,
        time,
        value: 0.0,
        bound: 0.0,
        message: message.into(),
    }
}

/// `Δd(x, x₀)` for one vertex of the scanned ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurvatureValue {
    pub vertex: VertexId,
    pub distance: usize,
    pub delta_d: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvatureReport {
    pub root: VertexId,
    pub radius: usize,
    /// One entry per vertex of `B_radius(root)`, ascending by vertex id.
    pub values: Vec<CurvatureValue>,
    /// Smallest `Δd`, the best candidate for `-C`.
    pub min: i64,
    pub max_valence: usize,
}

impl CurvatureReport {
    /// Vertices with `Δd(x, x₀) < -bound`.
    pub fn violations(&self, bound: i64) -> Vec<CurvatureValue> {
        self.values.iter().copied().filter(|v| v.delta_d < -bound).collect()
    }

    pub fn holds_with(&self, bound: i64) -> bool {
        self.min >= -bound
    }
}

/// Exact `Δd(x, x₀) = Σ_{y~x} (d(x, x₀) - d(y, x₀))` on `B_radius(x₀)`.
///
/// Distances are explored to `radius + 1`, so every neighbor distance used is
/// exact.
pub fn curvature_scan(oracle: &GraphOracle, x0: VertexId, radius: usize) -> Result<CurvatureReport> {
    if radius < 1 {
        return Err(HeatError::Contract("curvature scan needs radius >= 1".into()));
    }
    let metric = PathMetric::new(oracle, x0)?;
    metric.extend_to(radius + 1)?;
    let mut values = Vec::new();
    let mut max_valence = 0;
    for x in metric.ball_vertices(radius)? {
        let dx = metric.distance(x)? as i64;
        let nbrs = oracle.neighbors(x)?;
        max_valence = max_valence.max(nbrs.len());
        let mut delta_d = 0i64;
        for &y in nbrs.iter() {
            delta_d += dx - metric.distance(y)? as i64;
        }
        values.push(CurvatureValue {
            vertex: x,
            distance: dx as usize,
            delta_d,
        });
    }
    let min = values.iter().map(|v| v.delta_d).min().unwrap_or(0);
    Ok(CurvatureReport {
        root: x0,
        radius,
        values,
        min,
        max_valence,
    })
}

/// Heat-kernel mass `Σ_y p_k(t, x, y)` along the exhaustion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessEstimate {
    pub t: f64,
    pub x: VertexId,
    pub center: VertexId,
    /// `(radius, mass)`.
    pub masses: Vec<(usize, f64)>,
    /// A certified lower bound of the true mass.
    pub final_mass: f64,
    pub converged: bool,
    pub delta: Option<f64>,
    pub monotonicity_violations: Vec<usize>,
}

impl CompletenessEstimate {
    /// Converged with mass at least `1 - eps`.
    ///
    /// A `false` does not prove incompleteness: without a rate, slow
    /// convergence to 1 and a limit below 1 look the same.
    pub fn complete_at(&self, eps: f64) -> bool {
        self.converged && self.final_mass >= 1.0 - eps
    }
}

pub fn completeness_estimate(
    oracle: &GraphOracle,
    t: f64,
    x: VertexId,
    tol: f64,
    max_radius: usize,
) -> Result<CompletenessEstimate> {
    completeness_estimate_from(oracle, oracle.root(), t, x, tol, max_radius)
}

/// Mass trace with balls centered at `center`.
pub fn completeness_estimate_from(
    oracle: &GraphOracle,
    center: VertexId,
    t: f64,
    x: VertexId,
    tol: f64,
    max_radius: usize,
) -> Result<CompletenessEstimate> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(HeatError::Contract(format!("time must be positive, got {t}")));
    }
    let trace = run_exhaustion(oracle, center, &[x], tol, max_radius, |k| k.row_sum(t, x))?;
    Ok(CompletenessEstimate {
        t,
        x,
        center,
        final_mass: trace.values.last().map(|v| v.1).unwrap_or(0.0),
        masses: trace.values,
        converged: trace.converged,
        delta: trace.delta,
        monotonicity_violations: trace.violations,
    })
}

/// `Σ_x u(t, x) - Σ_x u₀(x)` for the Dirichlet evolution on `B_radius(root)`.
///
/// Never positive (beyond round-off) for `u₀ ≥ 0`; tends to zero with the
/// radius on stochastically complete graphs.
pub fn mass_conservation_check(oracle: &GraphOracle, u0: &VertexFunction, t: f64, radius: usize) -> Result<f64> {
    if !(t > 0.0) {
        return Err(HeatError::Contract(format!("time must be positive, got {t}")));
    }
    Ok(evolve(oracle, u0, t, radius)?.sum() - u0.sum())
}

/// [`mass_conservation_check`] over several radii.
pub fn mass_defect_trace(
    oracle: &GraphOracle,
    u0: &VertexFunction,
    t: f64,
    radii: impl IntoIterator<Item = usize>,
) -> Result<Vec<(usize, f64)>> {
    radii.into_iter().map(|r| Ok((r, mass_conservation_check(oracle, u0, t, r)?))).collect()
}

/// `sup |u(t, ·)| - sup |u₀|`; nonpositive up to round-off.
pub fn uniqueness_bound_check(oracle: &GraphOracle, u0: &VertexFunction, t: f64, radius: usize) -> Result<f64> {
    Ok(evolve(oracle, u0, t, radius)?.sup_norm() - u0.sup_norm())
}

/// Maxima of one solution of `∂_t u + Δ_U u = 0` with zero boundary values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParabolicSample {
    /// `max` over the sampled `[0, T] × U`.
    pub overall_max: f64,
    /// `max` over `({0} × U) ∪ ([0, T] × ∂U)`.
    pub parabolic_boundary_max: f64,
    pub witness_vertex: VertexId,
    pub witness_time: f64,
    pub grid_points: usize,
}

/// Largest value over the grid `t_s = T s / (points + 1)`, `s = 1..=points + 1`.
fn sample_on_grid(kernel: &FiniteKernel, u0: &[f64], horizon: f64, points: usize) -> Result<(f64, usize, f64)> {
    let mut best = (f64::NEG_INFINITY, 0, 0.0);
    for s in 1..=points + 1 {
        let t = horizon * s as f64 / (points + 1) as f64;
        let u = kernel.apply(t, u0)?;
        for (i, &v) in u.iter().enumerate() {
            if v > best.0 {
                best = (v, i, t);
            }
        }
    }
    Ok(best)
}

/// Samples `u(t) = e^{-tΔ_U} u₀` on `t = 0`, `t = T` and a uniform grid of
/// interior times, and compares its maximum with the maximum over the
/// parabolic boundary. When the positive times come within `1e-6` of the
/// bound, the grid is doubled (up to three times) before reporting.
pub fn parabolic_sample(kernel: &FiniteKernel, u0: &VertexFunction, horizon: f64) -> Result<ParabolicSample> {
    if !(horizon > 0.0) {
        return Err(HeatError::Contract(format!("time horizon must be positive, got {horizon}")));
    }
    let domain = kernel.domain();
    let init = u0.restrict(domain.interior());
    let (mut boundary_max, mut witness_vertex, mut witness_time) = init
        .iter()
        .enumerate()
        .fold((f64::NEG_INFINITY, domain.vertex_at(0), 0.0), |best, (i, &v)| {
            if v > best.0 {
                (v, domain.vertex_at(i), 0.0)
            } else {
                best
            }
        });
    if let Some(&b) = domain.boundary().first() {
        if boundary_max < 0.0 {
            (boundary_max, witness_vertex) = (0.0, b);
        }
    }
    let mut points = PARABOLIC_GRID;
    let (mut value, mut index, mut time) = sample_on_grid(kernel, &init, horizon, points)?;
    let mut refinements = 0;
    while value <= boundary_max && boundary_max - value < 1e-6 && refinements < 3 {
        points *= 2;
        refinements += 1;
        (value, index, time) = sample_on_grid(kernel, &init, horizon, points)?;
    }
    let mut overall = boundary_max;
    if value > overall {
        overall = value;
        witness_vertex = domain.vertex_at(index);
        witness_time = time;
    }
    Ok(ParabolicSample {
        overall_max: overall,
        parabolic_boundary_max: boundary_max,
        witness_vertex,
        witness_time,
        grid_points: points,
    })
}

/// Random-data check that heat solutions with zero boundary values peak on
/// the parabolic boundary.
pub fn verify_parabolic_max_principle(
    oracle: &GraphOracle,
    domain: &FiniteDomain,
    trials: usize,
    horizon: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let kernel = finite_kernel(oracle, domain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("parabolic maximum principle");
    for trial in 0..trials {
        let u0: VertexFunction = domain
            .interior()
            .iter()
            .map(|&x| (x, rng.random_range(-1.0..=1.0)))
            .collect();
        let sample = parabolic_sample(&kernel, &u0, horizon)?;
        report.trials += 1;
        report.record(trial, sample.overall_max, sample.parabolic_boundary_max + PARABOLIC_TOL, || {
            witness(
                Some(sample.witness_vertex),
                Some(sample.witness_time),
                "solution exceeds its parabolic-boundary maximum",
            )
        });
    }
    Ok(report)
}

/// Checks the elliptic maximum principle for one function on `domain`.
///
/// The function must be subharmonic (`Δf ≤ 0`) at every interior vertex;
/// otherwise the report is [`Outcome::NotApplicable`] with a witness. A
/// subharmonic `f` passes if its maximum over `U` is reached on `∂U`, or if
/// it is constant on the connected component of an interior maximizer.
pub fn verify_elliptic_max_principle(
    oracle: &GraphOracle,
    domain: &FiniteDomain,
    f: &VertexFunction,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("elliptic maximum principle");
    report.trials = 1;
    let restricted: VertexFunction = domain.vertices().iter().map(|&x| (x, f.get(x))).collect();
    let tol = 1e-10 * (1.0 + restricted.sup_norm());
    let lap = laplacian_apply(oracle, &restricted)?;
    for &x in domain.interior() {
        if lap.get(x) > tol {
            report.outcome = Outcome::NotApplicable;
            report.notes.push(format!("not subharmonic at {x}: Δf = {}", lap.get(x)));
            report.worst_margin = lap.get(x);
            return Ok(report);
        }
    }
    let max_of = |set: &[VertexId]| {
        set.iter()
            .map(|&x| (f.get(x), x))
            .fold(None, |acc: Option<(f64, VertexId)>, cur| match acc {
                Some(best) if best.0 >= cur.0 => Some(best),
                _ => Some(cur),
            })
    };
    let boundary_max = max_of(domain.boundary());
    let Some((interior_max, argmax)) = max_of(domain.interior()) else {
        report.notes.push("empty interior".into());
        return Ok(report);
    };
    if let Some((b, _)) = boundary_max {
        report.worst_margin = interior_max - b - tol;
        if interior_max <= b + tol {
            return Ok(report);
        }
    }
    // interior maximum: f must be constant on the component of argmax in U
    let mut seen = std::collections::BTreeSet::from([argmax]);
    let mut queue = VecDeque::from([argmax]);
    while let Some(x) = queue.pop_front() {
        if (f.get(x) - interior_max).abs() > tol {
            report.record(0, interior_max, boundary_max.map_or(interior_max, |b| b.0), || {
                witness(
                    Some(argmax),
                    None,
                    format!("interior maximum at {argmax} but f is not constant (differs at {x})"),
                )
            });
            return Ok(report);
        }
        for &y in oracle.neighbors(x)?.iter() {
            if domain.contains(y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    report.notes.push(format!("maximum attained in the interior at {argmax}; f is constant there"));
    Ok(report)
}

/// Solves `Δf = source` on `Ů` with `f = boundary` on `∂U`.
///
/// `Δ` is the ambient Laplacian, so interior rows see the boundary values as
/// a load. The result is defined on all of `U`.
pub fn solve_dirichlet_problem(
    oracle: &GraphOracle,
    domain: &FiniteDomain,
    boundary: &VertexFunction,
    source: &VertexFunction,
) -> Result<VertexFunction> {
    let matrix = dirichlet_matrix(oracle, domain)?;
    let mut rhs = DVector::from_iterator(matrix.dim(), domain.interior().iter().map(|&x| source.get(x)));
    for (i, &x) in domain.interior().iter().enumerate() {
        for &y in oracle.neighbors(x)?.iter() {
            if !domain.is_interior(y) {
                rhs[i] += boundary.get(y);
            }
        }
    }
    let chol = matrix
        .matrix()
        .clone()
        .cholesky()
        .ok_or_else(|| HeatError::Domain("Dirichlet matrix is singular on this domain".into()))?;
    let solution = chol.solve(&rhs);
    let mut f: VertexFunction = domain.boundary().iter().map(|&x| (x, boundary.get(x))).collect();
    for (i, &x) in domain.interior().iter().enumerate() {
        f.set(x, solution[i]);
    }
    Ok(f)
}

/// Random subharmonic functions (`Δf = -g`, `g ≥ 0`, random boundary values)
/// fed through [`verify_elliptic_max_principle`].
///
/// A domain without boundary is a whole finite graph, where the Dirichlet
/// problem is singular and the only subharmonic functions are constants;
/// the trials then use random constants.
pub fn verify_elliptic_trials(
    oracle: &GraphOracle,
    domain: &FiniteDomain,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("elliptic maximum principle");
    let closed = domain.boundary().is_empty();
    if closed {
        report.notes.push("domain has no boundary: trials use constant functions".into());
    }
    for trial in 0..trials {
        if closed {
            let f = VertexFunction::constant_on(domain.vertices(), rng.random_range(-1.0..=1.0));
            let single = verify_elliptic_max_principle(oracle, domain, &f)?;
            report.trials += 1;
            report.worst_margin = report.worst_margin.max(single.worst_margin);
            if single.outcome != Outcome::Pass {
                report.outcome = Outcome::Fail;
                report.violations.extend(single.violations.into_iter().map(|v| Violation { trial, ..v }));
            }
            continue;
        }
        let boundary: VertexFunction = domain
            .boundary()
            .iter()
            .map(|&x| (x, rng.random_range(-1.0..=1.0)))
            .collect();
        let source: VertexFunction = domain
            .interior()
            .iter()
            .map(|&x| (x, -rng.random_range(0.0..=1.0)))
            .collect();
        let f = solve_dirichlet_problem(oracle, domain, &boundary, &source)?;
        let single = verify_elliptic_max_principle(oracle, domain, &f)?;
        report.trials += 1;
        report.worst_margin = report.worst_margin.max(single.worst_margin);
        match single.outcome {
            Outcome::Pass => {}
            Outcome::Fail | Outcome::NotApplicable => {
                report.outcome = Outcome::Fail;
                for mut v in single.violations {
                    v.trial = trial;
                    report.violations.push(v);
                }
                for n in single.notes {
                    report.violations.push(Violation {
                        trial,
                        ..witness(None, None, n)
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Random `f, g` supported on `vertices`, entries uniform in `[-1, 1]`.
fn random_pair(rng: &mut ChaCha8Rng, vertices: &[VertexId]) -> (VertexFunction, VertexFunction) {
    let mut draw = || -> VertexFunction {
        vertices
            .iter()
            .filter_map(|&x| rng.random_bool(0.7).then(|| (x, rng.random_range(-1.0..=1.0))))
            .collect()
    };
    let f = draw();
    let g = draw();
    (f, g)
}

/// The operator identity battery on random functions supported in `window`:
/// Green's identity `(df, dg) = ⟨Δf, g⟩`, symmetry `⟨Δf, g⟩ = ⟨f, Δg⟩`,
/// positivity `⟨Δf, f⟩ ≥ 0`, `A = M - Δ`, and `Δ_U` equal to its probe
/// assembly (when the window has interior).
pub fn identity_suite(
    oracle: &GraphOracle,
    window: &FiniteDomain,
    trials: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut green = VerificationReport::new("green identity (df,dg) = <Δf,g>");
    let mut symmetry = VerificationReport::new("symmetry <Δf,g> = <f,Δg>");
    let mut positivity = VerificationReport::new("positivity <Δf,f> >= 0");
    let mut adjacency = VerificationReport::new("adjacency A = M - Δ");
    for trial in 0..trials {
        let (f, g) = random_pair(&mut rng, window.vertices());
        let lf = laplacian_apply(oracle, &f)?;
        let lg = laplacian_apply(oracle, &g)?;
        let scale = 1.0 + f.norm_l2() * g.norm_l2();
        let tol = IDENTITY_TOL * scale;

        let edge = edge_inner(&coboundary(oracle, &f)?, &coboundary(oracle, &g)?);
        green.trials += 1;
        green.record(trial, (edge - lf.dot(&g)).abs(), tol, || witness(None, None, "(df,dg) differs from <Δf,g>"));

        symmetry.trials += 1;
        symmetry.record(trial, (lf.dot(&g) - f.dot(&lg)).abs(), tol, || witness(None, None, "<Δf,g> differs from <f,Δg>"));

        positivity.trials += 1;
        positivity.record(trial, -lf.dot(&f), IDENTITY_TOL * (1.0 + f.dot(&f)), || witness(None, None, "<Δf,f> is negative"));

        let diff = valence_apply(oracle, &f)?.sub(&lf).sub(&adjacency_apply(oracle, &f)?);
        adjacency.trials += 1;
        adjacency.record(trial, diff.sup_norm(), IDENTITY_TOL * (1.0 + f.sup_norm()), || {
            witness(diff.support().next(), None, "Mf - Δf differs from Af")
        });
    }
    let mut reports = vec![green, symmetry, positivity, adjacency];
    if window.interior_len() > 0 {
        let mut probe = VerificationReport::new("dirichlet matrix = π∘Δ∘ι probe");
        let assembled = dirichlet_matrix(oracle, window)?;
        let probed: DMatrix<f64> = dirichlet_matrix_by_probe(oracle, window)?;
        probe.trials = 1;
        probe.record(0, (assembled.matrix() - probed).amax(), 0.0, || {
            witness(None, None, "assembled and probed Dirichlet matrices differ")
        });
        reports.push(probe);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{self, z_to_id};
    use crate::graph::{ball, EdgeListGraph};

    fn z(i: i64) -> VertexId {
        VertexId(z_to_id(i))
    }

    #[test]
    fn curvature_on_z() {
        let g = generators::path_z();
        let r = curvature_scan(&g, z(0), 6).unwrap();
        for v in &r.values {
            let want = if v.vertex == z(0) { -2 } else { 0 };
            assert_eq!(v.delta_d, want, "at {}", v.vertex);
        }
        assert_eq!(r.min, -2);
        assert!(curvature_scan(&g, z(0), 0).is_err());
    }

    #[test]
    fn curvature_on_tree() {
        let g = generators::tree_regular(3);
        let r = curvature_scan(&g, VertexId(0), 5).unwrap();
        for v in &r.values {
            assert_eq!(v.delta_d, if v.vertex == VertexId(0) { -3 } else { -1 });
        }
        assert!(r.holds_with(r.max_valence as i64));
        assert!(r.violations(2).iter().all(|v| v.vertex == VertexId(0)));
    }

    #[test]
    fn curvature_on_figure1() {
        let g = generators::figure1();
        let r = curvature_scan(&g, g.root(), 12).unwrap();
        assert_eq!(r.values.len(), 13 * 14 / 2);
        assert!(r.values.iter().all(|v| v.delta_d == -2));
        assert_eq!(r.max_valence, 26);
    }

    #[test]
    fn star_growing_violates_weak_curvature() {
        let g = generators::star_growing(2);
        let r = curvature_scan(&g, g.root(), 10).unwrap();
        assert!(r.min <= -9);
        assert!(r.min >= -(r.max_valence as i64));
    }

    #[test]
    fn zero_data() {
        let g = generators::path_z();
        let zero = VertexFunction::new();
        assert_eq!(mass_conservation_check(&g, &zero, 1.0, 5).unwrap(), 0.0);
        assert_eq!(uniqueness_bound_check(&g, &zero, 1.0, 5).unwrap(), 0.0);
        let domain = ball(&g, z(0), 4).unwrap();
        let k = finite_kernel(&g, &domain).unwrap();
        let s = parabolic_sample(&k, &zero, 1.0).unwrap();
        assert_eq!((s.overall_max, s.parabolic_boundary_max), (0.0, 0.0));
    }

    #[test]
    fn delta_peaks_at_time_zero() {
        let g = generators::lattice_z2();
        let domain = ball(&g, g.root(), 4).unwrap();
        let k = finite_kernel(&g, &domain).unwrap();
        let s = parabolic_sample(&k, &VertexFunction::delta(g.root()), 3.0).unwrap();
        assert_eq!(s.parabolic_boundary_max, 1.0);
        assert_eq!(s.overall_max, 1.0);
        assert_eq!(s.witness_time, 0.0);
    }

    #[test]
    fn elliptic_constant_and_distance() {
        let g = generators::path_z();
        let domain = ball(&g, z(0), 4).unwrap();
        let c = VertexFunction::constant_on(domain.vertices(), 2.0);
        assert!(verify_elliptic_max_principle(&g, &domain, &c).unwrap().passed());

        // f = -d(., 0): Δf(0) = 2 > 0
        let f: VertexFunction = (-4..=4).map(|i: i64| (z(i), -(i.abs() as f64))).collect();
        let r = verify_elliptic_max_principle(&g, &domain, &f).unwrap();
        assert_eq!(r.outcome, Outcome::NotApplicable);
        assert!(r.notes[0].contains("not subharmonic at 0"));
    }

    #[test]
    fn elliptic_detects_interior_peak() {
        // a superharmonic bump is a counterexample once we skip the hypothesis check
        let g = generators::path_z();
        let domain = ball(&g, z(0), 3).unwrap();
        let harmonic = solve_dirichlet_problem(
            &g,
            &domain,
            &[(z(-3), 1.0), (z(3), 4.0)].into_iter().collect(),
            &VertexFunction::new(),
        )
        .unwrap();
        // linear interpolation between the boundary values
        for i in -3..=3 {
            assert!((harmonic.get(z(i)) - (2.5 + 0.5 * i as f64)).abs() < 1e-12);
        }
        assert!(verify_elliptic_max_principle(&g, &domain, &harmonic).unwrap().passed());
    }

    #[test]
    fn elliptic_random_trials_on_small_graph() {
        let g = generators::random_connected(40, 0.05, 3);
        let domain = ball(&g, g.root(), 2).unwrap();
        if domain.interior_len() > 0 && !domain.boundary().is_empty() {
            let r = verify_elliptic_trials(&g, &domain, 20, 1).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn identities_on_k4() {
        let edges = (0..4u64).flat_map(|a| (a + 1..4).map(move |b| (VertexId(a), VertexId(b))));
        let g = EdgeListGraph::from_edges(edges).unwrap().into_oracle("k4").unwrap();
        let window = FiniteDomain::from_vertices(&g, g.vertices().unwrap()).unwrap();
        let reports = identity_suite(&g, &window, 50, 0).unwrap();
        assert_eq!(reports.len(), 5);
        assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
    }

    #[test]
    fn mass_defect_linearity() {
        let g = generators::path_z();
        let u0: VertexFunction = [(z(0), 1.0), (z(1), -0.5), (z(-2), 0.25)].into_iter().collect();
        let whole = mass_conservation_check(&g, &u0, 1.0, 6).unwrap();
        let pos = mass_conservation_check(&g, &u0.positive_part(), 1.0, 6).unwrap();
        let neg = mass_conservation_check(&g, &u0.negative_part(), 1.0, 6).unwrap();
        assert!((whole - (pos - neg)).abs() < 1e-14);
        assert!(pos <= 1e-10 && neg <= 1e-10);
    }

    #[test]
    fn short_time_mass_is_local() {
        let g = generators::figure1();
        let est = completeness_estimate(&g, 1e-6, g.root(), 1e-8, 5).unwrap();
        assert!(est.masses[0].1 >= 1.0 - 1e-3);
    }
    #[test]
    fn elliptic_trials_on_a_closed_graph() {
        let g = generators::random_connected(8, 0.3, 4);
        let whole = FiniteDomain::from_vertices(&g, (0..8).map(VertexId)).unwrap();
        assert!(whole.boundary().is_empty());
        let r = verify_elliptic_trials(&g, &whole, 10, 2).unwrap();
        assert!(r.passed() && r.trials == 10, "{r:?}");
        assert_eq!(r.notes.len(), 1);
    }
}
