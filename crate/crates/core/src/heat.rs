//! Heat kernels on finite domains and their monotone exhaustion limit.
//!
//! On a finite domain `U` the Dirichlet heat kernel is the eigen-sum
//! `p_U(t,x,y) = Σ_j e^{-λ_j t} Φ_j(x) Φ_j(y)` over the spectral decomposition
//! of `Δ_U`, extended by zero outside the interior. Along the ball exhaustion
//! `B_k(x₀)` these kernels increase pointwise in `k`; their limit is the heat
//! kernel `p(t,x,y)` of the infinite graph. Increments are the only
//! convergence signal available, so estimates report them rather than
//! extrapolate.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::graph::{ball, exhaustion, FiniteDomain, GraphOracle, PathMetric, VertexId};
use crate::operators::{dirichlet_matrix, laplacian_apply, DirichletMatrix, VertexFunction};
use crate::spectral::{eigensolve, SpectralDecomposition};
use crate::{HeatError, Result};

/// Default absolute increment at which an exhaustion counts as converged.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default largest ball radius an exhaustion will try.
pub const DEFAULT_MAX_RADIUS: usize = 40;
/// Slack allowed for `p_k ≤ p_{k+1}` before a step is flagged.
pub const MONOTONICITY_SLACK: f64 = 1e-12;

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(HeatError::Contract(format!("time must be finite and nonnegative, got {t}")))
    }
}

/// The Dirichlet heat kernel of one finite domain.
///
/// Holds `Δ_U` and its decomposition; every evaluation is a closed-form sum,
/// so the object is immutable and can be shared across threads.
#[derive(Debug, Clone)]
pub struct FiniteKernel {
    matrix: DirichletMatrix,
    decomposition: SpectralDecomposition,
}

/// Assembles `Δ_U` on `domain` and decomposes it.
pub fn finite_kernel(oracle: &GraphOracle, domain: &FiniteDomain) -> Result<FiniteKernel> {
    FiniteKernel::from_matrix(dirichlet_matrix(oracle, domain)?)
}

impl FiniteKernel {
    pub fn from_matrix(matrix: DirichletMatrix) -> Result<Self> {
        let decomposition = eigensolve(&matrix)?;
        Ok(FiniteKernel { matrix, decomposition })
    }

    pub fn domain(&self) -> &FiniteDomain {
        self.matrix.domain()
    }

    pub fn matrix(&self) -> &DirichletMatrix {
        &self.matrix
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn damping(&self, t: f64) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.decomposition.eigenvalues().iter().map(|&l| (-l * t).exp()))
    }

    /// `p_U(t, x, y)`; zero unless both points are interior.
    pub fn evaluate(&self, t: f64, x: VertexId, y: VertexId) -> Result<f64> {
        check_time(t)?;
        let domain = self.domain();
        let (Some(i), Some(k)) = (domain.index_of(x), domain.index_of(y)) else {
            return Ok(0.0);
        };
        if t == 0.0 {
            return Ok(if i == k { 1.0 } else { 0.0 });
        }
        let phi = self.decomposition.eigenvectors();
        Ok(self
            .decomposition
            .eigenvalues()
            .iter()
            .enumerate()
            .map(|(j, &l)| (-l * t).exp() * phi[(i, j)] * phi[(k, j)])
            .sum())
    }

    /// The full matrix `[p_U(t, x, y)]` over interior indices.
    pub fn kernel_matrix(&self, t: f64) -> Result<DMatrix<f64>> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(DMatrix::identity(self.dim(), self.dim()));
        }
        Ok(self.decomposition.spectral_function(|l| (-l * t).exp()))
    }

    /// `∂_t p_U(t, ·, ·) = -Σ_j λ_j e^{-λ_j t} Φ_j Φ_jᵀ`.
    pub fn time_derivative_matrix(&self, t: f64) -> Result<DMatrix<f64>> {
        check_time(t)?;
        Ok(self.decomposition.spectral_function(|l| -l * (-l * t).exp()))
    }

    /// `Σ_y p_U(t, x, y)`, zero for non-interior `x`.
    pub fn row_sum(&self, t: f64, x: VertexId) -> Result<f64> {
        check_time(t)?;
        match self.domain().index_of(x) {
            Some(i) => Ok(self.row_sums(t)?[i]),
            None => Ok(0.0),
        }
    }

    /// All row sums, i.e. `e^{-tΔ_U} 1`.
    pub fn row_sums(&self, t: f64) -> Result<Vec<f64>> {
        self.apply(t, &vec![1.0; self.dim()])
    }

    /// `e^{-tΔ_U} v` on interior coordinates.
    pub fn apply(&self, t: f64, v: &[f64]) -> Result<Vec<f64>> {
        check_time(t)?;
        if v.len() != self.dim() {
            return Err(HeatError::Contract(format!(
                "vector has length {}, interior has {} vertices",
                v.len(),
                self.dim()
            )));
        }
        if t == 0.0 {
            return Ok(v.to_vec());
        }
        let phi = self.decomposition.eigenvectors();
        let coeffs = phi.tr_mul(&DVector::from_column_slice(v)).component_mul(&self.damping(t));
        Ok((phi * coeffs).iter().copied().collect())
    }

    /// `x ↦ Σ_y p_U(t, x, y) u₀(y)`. The support of `u₀` must be interior.
    pub fn evolve(&self, u0: &VertexFunction, t: f64) -> Result<VertexFunction> {
        check_time(t)?;
        let domain = self.domain();
        if let Some(x) = u0.support().find(|&x| !domain.is_interior(x)) {
            return Err(HeatError::Domain(format!("initial data at {x} lies outside the domain interior")));
        }
        if t == 0.0 {
            return Ok(u0.clone());
        }
        let out = self.apply(t, &u0.restrict(domain.interior()))?;
        Ok(domain.interior().iter().copied().zip(out).collect())
    }
}

/// Convergence trace of `p_k(t, x, y)` along the ball exhaustion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelEstimate {
    pub t: f64,
    pub x: VertexId,
    pub y: VertexId,
    /// Center of the exhausting balls.
    pub center: VertexId,
    /// `(radius, p_radius(t, x, y))`, radii consecutive.
    pub values_by_radius: Vec<(usize, f64)>,
    /// The last computed value.
    pub limit: f64,
    pub converged: bool,
    /// Last increment, absent when only one radius was computed.
    pub delta: Option<f64>,
    /// Radii `k` where `p_k < p_{k-1} - 1e-12`. Any entry means numerical trouble.
    pub monotonicity_violations: Vec<usize>,
}

/// Common result of an exhaustion run over some scalar probe.
#[derive(Debug, Clone)]
pub(crate) struct ExhaustionTrace {
    pub values: Vec<(usize, f64)>,
    pub converged: bool,
    pub delta: Option<f64>,
    pub violations: Vec<usize>,
}

/// Smallest ball radius around `center` whose interior holds all `points`.
pub(crate) fn smallest_interior_radius(oracle: &GraphOracle, center: VertexId, points: &[VertexId]) -> Result<usize> {
    let metric = PathMetric::new(oracle, center)?;
    let mut radius = 1;
    for &p in points {
        radius = radius.max(metric.distance(p)?);
    }
    loop {
        let domain = FiniteDomain::from_vertices(oracle, metric.ball_vertices(radius)?)?;
        if points.iter().all(|&p| domain.is_interior(p)) {
            return Ok(radius);
        }
        radius += 1;
    }
}

pub(crate) fn run_exhaustion<F>(
    oracle: &GraphOracle,
    center: VertexId,
    points: &[VertexId],
    tol: f64,
    max_radius: usize,
    mut probe: F,
) -> Result<ExhaustionTrace>
where
    F: FnMut(&FiniteKernel) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(HeatError::Contract(format!("tolerance must be positive, got {tol}")));
    }
    let k_min = smallest_interior_radius(oracle, center, points)?;
    if k_min > max_radius {
        return Err(HeatError::Domain(format!(
            "max radius {max_radius} is below {k_min}, the smallest radius with the probed vertices interior"
        )));
    }
    let mut balls = exhaustion(oracle, center);
    balls.skip_to(k_min);
    let mut trace = ExhaustionTrace {
        values: Vec::new(),
        converged: false,
        delta: None,
        violations: Vec::new(),
    };
    for radius in k_min..=max_radius {
        let domain = balls.next().expect("exhaustion is infinite")?;
        let value = probe(&finite_kernel(oracle, &domain)?)?;
        if let Some(&(_, prev)) = trace.values.last() {
            let delta = value - prev;
            if delta < -MONOTONICITY_SLACK {
                trace.violations.push(radius);
            }
            trace.delta = Some(delta);
            trace.values.push((radius, value));
            if delta.abs() < tol {
                trace.converged = true;
                break;
            }
        } else {
            trace.values.push((radius, value));
        }
    }
    Ok(trace)
}

/// `p(t, x, y)` along balls centered at the oracle root.
pub fn kernel_estimate(
    oracle: &GraphOracle,
    t: f64,
    x: VertexId,
    y: VertexId,
    tol: f64,
    max_radius: usize,
) -> Result<KernelEstimate> {
    kernel_estimate_from(oracle, oracle.root(), t, x, y, tol, max_radius)
}

/// `p(t, x, y)` along balls centered at `center`.
///
/// Starts at the smallest radius with `x` and `y` interior and grows the ball
/// until the increment drops below `tol` or `max_radius` is reached.
pub fn kernel_estimate_from(
    oracle: &GraphOracle,
    center: VertexId,
    t: f64,
    x: VertexId,
    y: VertexId,
    tol: f64,
    max_radius: usize,
) -> Result<KernelEstimate> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(HeatError::Contract(format!("time must be positive, got {t}")));
    }
    let trace = run_exhaustion(oracle, center, &[x, y], tol, max_radius, |k| k.evaluate(t, x, y))?;
    Ok(KernelEstimate {
        t,
        x,
        y,
        center,
        limit: trace.values.last().map(|v| v.1).unwrap_or(0.0),
        values_by_radius: trace.values,
        converged: trace.converged,
        delta: trace.delta,
        monotonicity_violations: trace.violations,
    })
}

/// Dirichlet evolution of `u₀` on `B_radius(root)`.
///
/// For `u₀ ≥ 0` this is a lower bound of the evolution on the whole graph.
pub fn evolve(oracle: &GraphOracle, u0: &VertexFunction, t: f64, radius: usize) -> Result<VertexFunction> {
    check_time(t)?;
    let domain = ball(oracle, oracle.root(), radius)?;
    if let Some(x) = u0.support().find(|&x| !domain.is_interior(x)) {
        return Err(HeatError::Domain(format!(
            "initial data at {x} lies outside the interior of the radius-{radius} ball"
        )));
    }
    if t == 0.0 {
        return Ok(u0.clone());
    }
    finite_kernel(oracle, &domain)?.evolve(u0, t)
}

/// `max |p_U(t+s) - p_U(t) p_U(s)|` over interior pairs.
pub fn semigroup_check(kernel: &FiniteKernel, t: f64, s: f64) -> Result<f64> {
    if !(t > 0.0 && s > 0.0) {
        return Err(HeatError::Contract(format!("semigroup check needs t, s > 0, got {t}, {s}")));
    }
    let joint = kernel.kernel_matrix(t + s)?;
    let product = kernel.kernel_matrix(t)? * kernel.kernel_matrix(s)?;
    Ok((joint - product).amax())
}

/// Centered-difference residual of `∂_t p_U = -Δ_U p_U` (Laplacian in `y`).
///
/// Returns `max |(p(t+h) - p(t-h)) / 2h + p(t) Δ_U|`, which is `O(h²)`.
pub fn heat_equation_residual(kernel: &FiniteKernel, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && t > h) {
        return Err(HeatError::Contract(format!("residual needs t > h > 0, got t = {t}, h = {h}")));
    }
    let forward = kernel.kernel_matrix(t + h)?;
    let backward = kernel.kernel_matrix(t - h)?;
    let lap_y = kernel.kernel_matrix(t)? * kernel.matrix().matrix();
    Ok(((forward - backward) / (2.0 * h) + lap_y).amax())
}

/// Same identity with the exact time derivative from the eigen-sum.
pub fn heat_equation_residual_exact(kernel: &FiniteKernel, t: f64) -> Result<f64> {
    let lap_y = kernel.kernel_matrix(t)? * kernel.matrix().matrix();
    Ok((kernel.time_derivative_matrix(t)? + lap_y).amax())
}

/// `residual(h) / residual(h/2)`; close to 4 for a second-order scheme.
pub fn heat_equation_order(kernel: &FiniteKernel, t: f64, h: f64) -> Result<f64> {
    Ok(heat_equation_residual(kernel, t, h)? / heat_equation_residual(kernel, t, h / 2.0)?)
}

/// Compares `Δ(P_t u₀)` with `P_t(Δu₀)`.
///
/// `P_t u₀` is evolved on `B_radius(root)` and `P_t Δu₀` on the strictly
/// larger `B_{radius+1}(root)`. The discrepancy is measured at interior
/// vertices whose neighbors are interior too, i.e. at distance at least two
/// from the boundary of the smaller ball. It vanishes as the radius grows,
/// and it is exactly zero (up to round-off) once the ball is the whole graph.
pub fn commutation_check(oracle: &GraphOracle, u0: &VertexFunction, t: f64, radius: usize) -> Result<f64> {
    check_time(t)?;
    let inner = ball(oracle, oracle.root(), radius)?;
    let lap_u0 = laplacian_apply(oracle, u0)?;
    for x in u0.support().chain(lap_u0.support()) {
        if !inner.is_interior(x) {
            return Err(HeatError::Domain(format!(
                "u0 or its neighborhood reaches {x}, outside the interior of the radius-{radius} ball"
            )));
        }
    }
    if t == 0.0 {
        let again = laplacian_apply(oracle, u0)?;
        return Ok(again.sub(&lap_u0).sup_norm());
    }
    let evolved = finite_kernel(oracle, &inner)?.evolve(u0, t)?;
    let lap_of_evolved = laplacian_apply(oracle, &evolved)?;
    let outer = ball(oracle, oracle.root(), radius + 1)?;
    let evolved_lap = finite_kernel(oracle, &outer)?.evolve(&lap_u0, t)?;

    let mut worst: f64 = 0.0;
    for &x in inner.interior() {
        let deep = oracle.neighbors(x)?.iter().all(|&y| inner.is_interior(y));
        if deep {
            worst = worst.max((lap_of_evolved.get(x) - evolved_lap.get(x)).abs());
        }
    }
    Ok(worst)
}

/// [`commutation_check`] for each radius in turn.
pub fn commutation_trace(
    oracle: &GraphOracle,
    u0: &VertexFunction,
    t: f64,
    radii: impl IntoIterator<Item = usize>,
) -> Result<Vec<(usize, f64)>> {
    radii.into_iter().map(|r| Ok((r, commutation_check(oracle, u0, t, r)?))).collect()
}
