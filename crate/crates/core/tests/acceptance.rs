//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use heatgraph::diagnostics::{
    completeness_estimate, curvature_scan, mass_conservation_check, uniqueness_bound_check, verify_elliptic_trials,
    verify_parabolic_max_principle,
};
use heatgraph::graph::generators::{
    figure1, figure1_id, lattice_id, lattice_z2, path_z, random_connected, tree_regular, z_to_id,
};
use heatgraph::graph::{ball, FiniteDomain, GraphOracle, PathMetric, VertexId};
use heatgraph::heat::{
    finite_kernel, heat_equation_order, heat_equation_residual_exact, kernel_estimate, kernel_estimate_from,
};
use heatgraph::operators::{coboundary, dirichlet_matrix, edge_inner, laplacian_apply, operator_norm_probe};
use heatgraph::spectral::{eigensolve, expm_negative};
use heatgraph::VertexFunction;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn z(i: i64) -> VertexId {
    VertexId(z_to_id(i))
}

/// The first `k` vertices of `g` in breadth-first order from the root.
fn bfs_prefix(g: &GraphOracle, k: usize) -> FiniteDomain {
    let metric = PathMetric::new(g, g.root()).unwrap();
    let mut picked = Vec::new();
    let mut r = 0;
    while picked.len() < k {
        let sphere = metric.sphere(r).unwrap();
        assert!(!sphere.is_empty(), "graph smaller than {k}");
        picked.extend(sphere);
        r += 1;
    }
    picked.truncate(k);
    FiniteDomain::from_vertices(g, picked).unwrap()
}

/// A `k`-vertex domain with nonempty interior and boundary inside a sparse
/// random graph on `n > k` vertices.
fn random_domain(rng: &mut ChaCha8Rng, n: u64, k: usize) -> (GraphOracle, FiniteDomain) {
    loop {
        let g = random_connected(n, 1.5 / n as f64, rng.random());
        let d = bfs_prefix(&g, k);
        if d.interior_len() > 0 && !d.boundary().is_empty() {
            return (g, d);
        }
    }
}

fn random_function(rng: &mut ChaCha8Rng, support: &[VertexId], lo: f64, hi: f64) -> VertexFunction {
    support.iter().map(|&x| (x, rng.random_range(lo..=hi))).collect()
}

/// `e^{-2} I₀(2)` from the power series `I₀(x) = Σ (x/2)^{2k} / (k!)²`.
fn bessel_oracle_z(t: f64) -> f64 {
    let half = t; // x = 2t
    let (mut term, mut sum, mut k) = (1.0f64, 1.0f64, 0.0f64);
    loop {
        k += 1.0;
        term *= half * half / (k * k);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    (-2.0 * t).exp() * sum
}

fn green_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..=60u64);
        let g = random_connected(n, rng.random_range(0.0..0.3), rng.random());
        let vs: Vec<VertexId> = (0..n).map(VertexId).collect();
        let f = random_function(&mut rng, &vs, -1.0, 1.0);
        let h = random_function(&mut rng, &vs, -1.0, 1.0);
        let lhs = edge_inner(&coboundary(&g, &f).unwrap(), &coboundary(&g, &h).unwrap());
        let rhs = laplacian_apply(&g, &f).unwrap().dot(&h);
        let margin = (lhs - rhs).abs() / (1.0 + f.norm_l2() * h.norm_l2());
        ensure!(margin <= 1e-12, "(df,dg) = {lhs} but <Δf,g> = {rhs} on {}", g.name());
        worst = worst.max(margin);
    }
    Ok(format!("200 pairs, worst scaled gap {worst:.1e}"))
}

fn laplacian_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..=60u64);
        let g = random_connected(n, rng.random_range(0.0..0.3), rng.random());
        let vs: Vec<VertexId> = (0..n).map(VertexId).collect();
        let f = random_function(&mut rng, &vs, -1.0, 1.0);
        let h = random_function(&mut rng, &vs, -1.0, 1.0);
        let a = laplacian_apply(&g, &f).unwrap().dot(&h);
        let b = f.dot(&laplacian_apply(&g, &h).unwrap());
        let margin = (a - b).abs() / (1.0 + f.norm_l2() * h.norm_l2());
        ensure!(margin <= 1e-12, "<Δf,g> = {a} but <f,Δg> = {b} on {}", g.name());
        worst = worst.max(margin);
    }
    Ok(format!("200 pairs, worst scaled gap {worst:.1e}"))
}

fn eigensolver_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_residual: f64 = 0.0;
    let mut worst_orth: f64 = 0.0;
    let mut min_ground = f64::INFINITY;
    let mut check = |m: &heatgraph::DirichletMatrix| -> Result<(), String> {
        let dec = eigensolve(m).map_err(|e| e.to_string())?;
        let a = m.matrix();
        let phi = dec.eigenvectors();
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(dec.eigenvalues()));
        let residual = (a * phi - phi * lambda).norm() / a.norm();
        let orth = (phi.transpose() * phi - DMatrix::identity(m.dim(), m.dim())).amax();
        ensure!(residual <= 1e-10, "relative residual {residual:e} at n = {}", m.dim());
        ensure!(orth <= 1e-10, "orthonormality defect {orth:e} at n = {}", m.dim());
        ensure!(dec.ground_state_energy() > 0.0, "λ₀ = {} at n = {}", dec.ground_state_energy(), m.dim());
        worst_residual = worst_residual.max(residual);
        worst_orth = worst_orth.max(orth);
        min_ground = min_ground.min(dec.ground_state_energy());
        Ok(())
    };
    let mut count = 0;
    while count < 100 {
        let k = rng.random_range(3..=75);
        let (g, d) = random_domain(&mut rng, 90, k);
        if d.interior_len() > 60 {
            continue;
        }
        check(&dirichlet_matrix(&g, &d).unwrap())?;
        count += 1;
    }
    let zg = path_z();
    let mut worst_closed: f64 = 0.0;
    for r in 1..=30 {
        let m = dirichlet_matrix(&zg, &ball(&zg, z(0), r).unwrap()).unwrap();
        check(&m)?;
        let n = m.dim();
        ensure!(n == 2 * r - 1, "ℤ ball of radius {r} has interior {n}");
        let dec = eigensolve(&m).unwrap();
        for (j, &l) in dec.eigenvalues().iter().enumerate() {
            let k = (j + 1) as f64;
            let exact = 2.0 - 2.0 * (k * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            ensure!((l - exact).abs() <= 1e-10, "n = {n}, k = {k}: {l} vs {exact}");
            worst_closed = worst_closed.max((l - exact).abs());
        }
    }
    Ok(format!(
        "130 matrices, residual {worst_residual:.1e}, orthonormality {worst_orth:.1e}, closed form {worst_closed:.1e}, min λ₀ {min_ground:.3e}"
    ))
}

fn kernel_vs_expm() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let k = rng.random_range(3..=60);
        let (g, d) = random_domain(&mut rng, 80, k);
        let kernel = finite_kernel(&g, &d).unwrap();
        for t in [0.1, 1.0, 5.0] {
            let gap = (kernel.kernel_matrix(t).unwrap() - expm_negative(kernel.matrix().matrix(), t).unwrap()).amax();
            ensure!(gap <= 1e-9, "t = {t}, {} interior vertices: gap {gap:e}", d.interior_len());
            worst = worst.max(gap);
        }
    }
    Ok(format!("50 domains x 3 times, worst entry gap {worst:.1e}"))
}

fn finite_kernel_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut min_entry, mut max_row, mut min_small_t) = (f64::INFINITY, 0.0f64, f64::INFINITY);
    let (mut worst_exact, mut ratios) = (0.0f64, (f64::INFINITY, 0.0f64));
    for _ in 0..20 {
        let (g, d) = random_domain(&mut rng, 60, 20);
        let kernel = finite_kernel(&g, &d).unwrap();
        for t in [0.01, 0.1, 1.0, 5.0] {
            let p = kernel.kernel_matrix(t).unwrap();
            min_entry = min_entry.min(p.min());
            ensure!(p.min() >= -1e-12, "negative kernel entry {} at t = {t}", p.min());
        }
        let sums: Vec<Vec<f64>> = [1e-1, 1e-2, 1e-3].iter().map(|&t| kernel.row_sums(t).unwrap()).collect();
        for i in 0..kernel.dim() {
            ensure!(sums[0][i] <= sums[1][i] && sums[1][i] <= sums[2][i], "row {i} not monotone as t ↓ 0");
            ensure!(sums[2][i] >= 1.0 - 1e-2, "row {i} sums to {} at t = 1e-3", sums[2][i]);
            ensure!(sums.iter().all(|s| s[i] <= 1.0 + 1e-10), "row {i} sum exceeds 1");
            max_row = max_row.max(sums[2][i]);
            min_small_t = min_small_t.min(sums[2][i]);
        }
        let exact = heat_equation_residual_exact(&kernel, 1.0).unwrap();
        ensure!(exact <= 1e-10, "exact heat residual {exact:e}");
        worst_exact = worst_exact.max(exact);
        let ratio = heat_equation_order(&kernel, 1.0, 1e-2).unwrap();
        ensure!((2.5..=6.0).contains(&ratio), "finite-difference ratio {ratio}");
        ratios = (ratios.0.min(ratio), ratios.1.max(ratio));
    }
    Ok(format!(
        "20 domains; min entry {min_entry:.1e}, row sums at t=1e-3 in [{min_small_t:.5}, {max_row:.5}], exact residual {worst_exact:.1e}, h-halving ratios [{:.3}, {:.3}]",
        ratios.0, ratios.1
    ))
}

fn monotone_exhaustion() -> Outcome {
    let cases: Vec<(&str, GraphOracle, f64, Vec<(VertexId, VertexId)>, usize)> = vec![
        ("path_z", path_z(), 1.0, vec![(z(0), z(0)), (z(0), z(3)), (z(-2), z(5))], 40),
        ("lattice_z2", lattice_z2(), 1.0, vec![(VertexId(lattice_id(0, 0)), VertexId(lattice_id(0, 0))), (VertexId(lattice_id(1, 0)), VertexId(lattice_id(0, 2)))], 14),
        ("tree_regular(3)", tree_regular(3), 0.5, vec![(VertexId(0), VertexId(0)), (VertexId(1), VertexId(5))], 6),
        ("figure1", figure1(), 1.0, vec![(VertexId(0), VertexId(0)), (VertexId(figure1_id(3, 1)), VertexId(figure1_id(4, 2)))], 20),
    ];
    let mut traces = 0;
    for (name, g, t, pairs, max_radius) in &cases {
        for &(x, y) in pairs {
            let est = kernel_estimate(g, *t, x, y, 1e-8, *max_radius).unwrap();
            for w in est.values_by_radius.windows(2) {
                ensure!(w[1].1 >= w[0].1 - 1e-12, "{name}: p_{} = {} < p_{} = {}", w[1].0, w[1].1, w[0].0, w[0].1);
            }
            ensure!(est.monotonicity_violations.is_empty(), "{name}: flagged radii {:?}", est.monotonicity_violations);
            traces += 1;
        }
    }
    let mut gaps = Vec::new();
    for (name, g, a, b, max_radius) in [
        ("path_z", path_z(), z(0), z(2), 40),
        ("lattice_z2", lattice_z2(), VertexId(lattice_id(0, 0)), VertexId(lattice_id(1, 1)), 20),
    ] {
        let x = g.root();
        ensure!(PathMetric::new(&g, a).unwrap().distance(b).unwrap() == 2, "{name}: centers not at distance 2");
        let pa = kernel_estimate_from(&g, a, 1.0, x, x, 1e-8, max_radius).unwrap();
        let pb = kernel_estimate_from(&g, b, 1.0, x, x, 1e-8, max_radius).unwrap();
        ensure!(pa.converged && pb.converged, "{name}: exhaustion did not converge");
        let gap = (pa.limit - pb.limit).abs();
        ensure!(gap <= 2e-8, "{name}: limits {} and {} differ by {gap:e}", pa.limit, pb.limit);
        gaps.push(format!("{name} {gap:.1e}"));
    }
    Ok(format!("{traces} traces nondecreasing; root independence gaps: {}", gaps.join(", ")))
}

fn z_kernel_value() -> Outcome {
    let start = Instant::now();
    let g = path_z();
    let est = kernel_estimate(&g, 1.0, z(0), z(0), 1e-8, 40).unwrap();
    let oracle = bessel_oracle_z(1.0);
    ensure!(est.converged, "did not converge by radius 40");
    ensure!((est.limit - oracle).abs() <= 1e-6, "p(1,0,0) = {} but e^-2 I0(2) = {oracle}", est.limit);
    let mass = completeness_estimate(&g, 1.0, z(0), 1e-8, 40).unwrap();
    ensure!(mass.converged && mass.final_mass >= 0.999, "mass {} (converged: {})", mass.final_mass, mass.converged);
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "p(1,0,0) = {:.10} vs oracle {oracle:.10} at radius {}, mass {:.9}",
        est.limit,
        est.values_by_radius.last().unwrap().0,
        mass.final_mass
    ))
}

fn figure1_exactness() -> Outcome {
    let start = Instant::now();
    let g = figure1();
    let report = curvature_scan(&g, g.root(), 25).unwrap();
    ensure!(report.values.len() == 26 * 27 / 2, "B_25 has {} vertices", report.values.len());
    if let Some(v) = report.values.iter().find(|v| v.delta_d != -2) {
        return Err(format!("Δd = {} at vertex {}", v.delta_d, v.vertex));
    }
    let out = Command::new(env!("CARGO_BIN_EXE_heatgraph"))
        .args(["curvature", "--graph", "builtin:figure1", "--radius", "25", "--bound", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure!(out.status.code() == Some(0) && text.contains("PASS"), "cli exit {:?}", out.status.code());
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("Δd = -2 at all {} vertices of B_25, cli PASS, {elapsed:.2?}", report.values.len()))
}

fn contraction_positivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut worst_norm, mut min_value) = (f64::NEG_INFINITY, f64::INFINITY);
    for trial in 0..100 {
        let k = rng.random_range(5..=40);
        let (g, d) = random_domain(&mut rng, 60, k);
        let kernel = finite_kernel(&g, &d).unwrap();
        let t = rng.random_range(0.01..5.0);
        let u0 = random_function(&mut rng, d.interior(), -1.0, 1.0);
        let u = kernel.evolve(&u0, t).unwrap();
        let gap = u.norm_l2() - u0.norm_l2();
        ensure!(gap <= 1e-12 * u0.norm_l2(), "trial {trial}: ‖P_t u0‖ exceeds ‖u0‖ by {gap:e}");
        worst_norm = worst_norm.max(gap);
        let v0 = random_function(&mut rng, d.interior(), 0.0, 1.0);
        let v = kernel.evolve(&v0, t).unwrap();
        let lowest = d.interior().iter().map(|&x| v.get(x)).fold(f64::INFINITY, f64::min);
        ensure!(lowest >= -1e-12, "trial {trial}: P_t u0 = {lowest:e} for u0 ≥ 0");
        min_value = min_value.min(lowest);
    }
    Ok(format!("100 trials, max ‖P_t u0‖ - ‖u0‖ = {worst_norm:.1e}, min of P_t u0 for u0 ≥ 0 = {min_value:.1e}"))
}

fn maximum_principles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut parabolic, mut elliptic) = (0, 0);
    for trial in 0..100u64 {
        let (g, d) = random_domain(&mut rng, 60, 30);
        let p = verify_parabolic_max_principle(&g, &d, 1, 2.0, trial).unwrap();
        ensure!(p.passed(), "parabolic trial {trial}: {:?}", p.violations);
        parabolic += p.trials;
        let e = verify_elliptic_trials(&g, &d, 1, trial).unwrap();
        ensure!(e.passed(), "elliptic trial {trial}: {:?} {:?}", e.violations, e.notes);
        elliptic += e.trials;
    }
    Ok(format!("{parabolic} parabolic and {elliptic} elliptic trials on 30-vertex domains, zero violations"))
}

fn sup_bound_and_mass() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = path_z();
    let mut worst: f64 = f64::NEG_INFINITY;
    for trial in 0..20 {
        let support: Vec<VertexId> = (-8..=8).map(z).collect();
        let u0 = random_function(&mut rng, &support, -1.0, 1.0);
        let t = rng.random_range(0.1..5.0);
        let gap = uniqueness_bound_check(&g, &u0, t, 20).unwrap();
        ensure!(gap <= 1e-12, "trial {trial}: sup |u(t)| exceeds sup |u0| by {gap:e}");
        worst = worst.max(gap);
    }
    for trial in 0..50 {
        let (g, d) = random_domain(&mut rng, 60, 30);
        let u0 = random_function(&mut rng, d.interior(), -1.0, 1.0);
        let u = finite_kernel(&g, &d).unwrap().evolve(&u0, rng.random_range(0.01..5.0)).unwrap();
        let gap = u.sup_norm() - u0.sup_norm();
        ensure!(gap <= 1e-12, "random domain trial {trial}: sup grows by {gap:e}");
        worst = worst.max(gap);
    }
    let defect = mass_conservation_check(&g, &VertexFunction::delta(z(0)), 1.0, 40).unwrap();
    ensure!(defect.abs() < 1e-3, "mass defect {defect:e} at radius 40");
    Ok(format!("70 trials, max sup gap {worst:.1e}; ℤ mass defect at radius 40 = {defect:.1e}"))
}

fn norm_probe() -> Outcome {
    let g = figure1();
    let witnesses: Vec<VertexId> = (1..=10).map(|n| VertexId(figure1_id(n, 0))).collect();
    let probes = operator_norm_probe(&g, &witnesses).unwrap();
    for (n, &p) in (1..=10u64).zip(&probes) {
        let exact = ((4 * n * n + 2 * n) as f64).sqrt();
        ensure!((p - exact).abs() <= 1e-12, "row {n}: {p} vs {exact}");
    }
    ensure!(probes.windows(2).all(|w| w[1] > w[0]), "figure1 probes not strictly increasing");
    let zg = path_z();
    let zp = operator_norm_probe(&zg, &(-5..=5).map(z).collect::<Vec<_>>()).unwrap();
    ensure!(zp.iter().all(|&p| (p - 6f64.sqrt()).abs() <= 1e-12 && p <= 4.0), "ℤ probes {zp:?}");
    Ok(format!("figure1 rows 1..10: {:.4} .. {:.4}; ℤ: √6 at 11 vertices", probes[0], probes[9]))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("green identity", green_identity),
        ("laplacian symmetry", laplacian_symmetry),
        ("eigensolver contract", eigensolver_contract),
        ("kernel vs expm oracle", kernel_vs_expm),
        ("finite-domain kernel properties", finite_kernel_properties),
        ("monotone exhaustion", monotone_exhaustion),
        ("Z heat-kernel value", z_kernel_value),
        ("figure1 exactness", figure1_exactness),
        ("contraction and positivity", contraction_positivity),
        ("maximum principles", maximum_principles),
        ("sup bound and mass defect", sup_bound_and_mass),
        ("operator-norm probe", norm_probe),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
