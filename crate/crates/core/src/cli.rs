//! The `heatgraph` command line.
//!
//! Every subcommand writes one artifact (CSV or JSON) to `--out` or stdout.
//! Exit codes: 0 on success or PASS, 1 on FAIL or a failed computation,
//! 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::diagnostics::{
    completeness_estimate_from, curvature_scan, identity_suite, verify_elliptic_trials,
    verify_parabolic_max_principle, Outcome, VerificationReport,
};
use crate::graph::{ball, FiniteDomain, GraphOracle, VertexId, DEFAULT_MAX_VERTICES};
use crate::heat::{finite_kernel, kernel_estimate_from, DEFAULT_MAX_RADIUS, DEFAULT_TOL};
use crate::io::{generate, load_vertex_function, GraphSpec};
use crate::spectral::eigensolve;
use crate::operators::dirichlet_matrix;
use crate::{HeatError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    MaxPrinciple,
    Identities,
    All,
}

/// Heat kernels of the physical Laplacian on locally finite graphs.
#[derive(Debug, Parser)]
#[command(name = "heatgraph", version)]
pub struct RunConfig {
    /// Graph to work on: `builtin:NAME[?key=value&...]` or `file:PATH`
    #[arg(long, global = true)]
    pub graph: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Shorthand for `--format json`
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the artifact here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Absolute increment at which an exhaustion counts as converged
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    #[arg(long = "max-radius", global = true, default_value_t = DEFAULT_MAX_RADIUS)]
    pub max_radius: usize,

    /// Safety cap on the number of explored vertices
    #[arg(long = "max-vertices", global = true, env = "HEATGRAPH_MAX_VERTICES", default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues (and optionally eigenvectors) of the Dirichlet Laplacian of a ball
    Spectrum {
        #[arg(long)]
        radius: usize,
        /// Ball center, defaults to the graph root
        #[arg(long)]
        center: Option<u64>,
        #[arg(long)]
        vectors: bool,
    },
    /// Convergence trace of p_k(t, x, y) along the ball exhaustion
    Kernel {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        y: Option<u64>,
        #[arg(long)]
        center: Option<u64>,
    },
    /// Evolve initial data read from a `vertex,value` CSV
    Solve {
        #[arg(long)]
        u0: PathBuf,
        /// Comma separated times
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// Ball radius, defaults to --max-radius
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Heat-kernel mass trace sum_y p_k(t, x, y)
    Completeness {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        center: Option<u64>,
    },
    /// Exact Δd(x, x0) on a ball around x0
    Curvature {
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        x0: Option<u64>,
        /// Fail if Δd(., x0) < -bound anywhere
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Run verification suites
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Radius of the ball the checks run on (finite graphs use all vertices)
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Time horizon of the parabolic check
        #[arg(long, default_value_t = 2.0)]
        horizon: f64,
    },
}

/// Successful run outcome, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

/// Exit code for an error: usage problems give 2, everything else 1.
pub fn error_code(err: &HeatError) -> i32 {
    match err {
        HeatError::Parse(_) | HeatError::Contract(_) => 2,
        _ => 1,
    }
}

fn usage(msg: impl Into<String>) -> HeatError {
    HeatError::Contract(msg.into())
}

fn positive_time(t: f64) -> Result<f64> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(usage(format!("--t must be positive, got {t}")))
    }
}

fn vertex(oracle: &GraphOracle, id: Option<u64>) -> Result<VertexId> {
    let v = id.map_or(oracle.root(), VertexId);
    if !oracle.contains(v) {
        return Err(HeatError::UnknownVertex(v));
    }
    Ok(v)
}

fn json_out(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// Executes one configured command, writing its artifact to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<Status> {
    if !(config.tol > 0.0) {
        return Err(usage(format!("--tol must be positive, got {}", config.tol)));
    }
    if config.max_radius < 1 {
        return Err(usage("--max-radius must be at least 1"));
    }
    let spec: GraphSpec = config
        .graph
        .as_deref()
        .ok_or_else(|| HeatError::Parse("--graph is required".into()))?
        .parse()?;
    let oracle = generate(&spec)?.with_max_vertices(config.max_vertices);
    let json = config.json || config.format == Format::Json;

    match &config.command {
        Command::Spectrum { radius, center, vectors } => {
            let center = vertex(&oracle, *center)?;
            let domain = ball(&oracle, center, *radius)?;
            let decomposition = eigensolve(&dirichlet_matrix(&oracle, &domain)?)?;
            let values = decomposition.eigenvalues();
            let phi = decomposition.eigenvectors();
            if json {
                let mut doc = json!({
                    "graph": spec.to_string(),
                    "center": center,
                    "radius": radius,
                    "interior": domain.interior(),
                    "eigenvalues": values,
                    "residual": decomposition.residual(),
                });
                if *vectors {
                    let cols: Vec<Vec<f64>> = (0..values.len()).map(|j| phi.column(j).iter().copied().collect()).collect();
                    doc["eigenvectors"] = json!(cols);
                }
                json_out(out, &doc)?;
            } else {
                writeln!(out, "index,eigenvalue")?;
                for (j, l) in values.iter().enumerate() {
                    writeln!(out, "{j},{l}")?;
                }
                if *vectors {
                    writeln!(out)?;
                    let header: Vec<String> = (0..values.len()).map(|j| format!("phi_{j}")).collect();
                    writeln!(out, "vertex,{}", header.join(","))?;
                    for (i, x) in domain.interior().iter().enumerate() {
                        let row: Vec<String> = phi.row(i).iter().map(|v| v.to_string()).collect();
                        writeln!(out, "{x},{}", row.join(","))?;
                    }
                }
            }
            Ok(Status::Pass)
        }

        Command::Kernel { t, x, y, center } => {
            let t = positive_time(*t)?;
            let (x, y) = (vertex(&oracle, *x)?, vertex(&oracle, *y)?);
            let center = vertex(&oracle, *center)?;
            let est = kernel_estimate_from(&oracle, center, t, x, y, config.tol, config.max_radius)?;
            if json {
                let trace: Vec<_> = est
                    .values_by_radius
                    .iter()
                    .enumerate()
                    .map(|(k, &(r, p))| json!({"k": k + 1, "radius": r, "p_k": p}))
                    .collect();
                json_out(
                    out,
                    &json!({
                        "t": t, "x": x, "y": y, "trace": trace,
                        "limit": est.limit, "converged": est.converged,
                    }),
                )?;
            } else {
                writeln!(out, "k,radius,p_k")?;
                for (k, (r, p)) in est.values_by_radius.iter().enumerate() {
                    writeln!(out, "{},{r},{p}", k + 1)?;
                }
                let delta = est.delta.map_or("none".to_string(), |d| d.to_string());
                writeln!(out, "# limit={},converged={},delta={delta}", est.limit, est.converged)?;
            }
            Ok(if est.monotonicity_violations.is_empty() { Status::Pass } else { Status::Fail })
        }

        Command::Solve { u0, t, radius } => {
            let u0 = load_vertex_function(u0)?;
            let radius = radius.unwrap_or(config.max_radius);
            for &ti in t {
                if !(ti >= 0.0 && ti.is_finite()) {
                    return Err(usage(format!("--t values must be nonnegative, got {ti}")));
                }
            }
            let domain = ball(&oracle, oracle.root(), radius)?;
            if let Some(x) = u0.support().find(|&x| !domain.is_interior(x)) {
                return Err(HeatError::Domain(format!(
                    "initial data at {x} lies outside the interior of the radius-{radius} ball"
                )));
            }
            let kernel = finite_kernel(&oracle, &domain)?;
            let mut samples = Vec::new();
            for &ti in t {
                let u = kernel.evolve(&u0, ti)?;
                samples.push((ti, domain.interior().iter().map(|&x| (x, u.get(x))).collect::<Vec<_>>()));
            }
            if json {
                let doc: Vec<_> = samples
                    .iter()
                    .map(|(ti, vals)| {
                        let vals: Vec<_> = vals.iter().map(|(x, v)| json!({"vertex": x, "value": v})).collect();
                        json!({"t": ti, "values": vals})
                    })
                    .collect();
                json_out(out, &json!({"graph": spec.to_string(), "radius": radius, "samples": doc}))?;
            } else {
                writeln!(out, "t,vertex,value")?;
                for (ti, vals) in &samples {
                    for (x, v) in vals {
                        writeln!(out, "{ti},{x},{v}")?;
                    }
                }
            }
            Ok(Status::Pass)
        }

        Command::Completeness { t, x, center } => {
            let t = positive_time(*t)?;
            let x = vertex(&oracle, *x)?;
            let center = vertex(&oracle, *center)?;
            let est = completeness_estimate_from(&oracle, center, t, x, config.tol, config.max_radius)?;
            if json {
                let trace: Vec<_> = est
                    .masses
                    .iter()
                    .enumerate()
                    .map(|(k, &(r, m))| json!({"k": k + 1, "radius": r, "mass": m}))
                    .collect();
                json_out(
                    out,
                    &json!({
                        "t": t, "x": x, "trace": trace,
                        "final_mass": est.final_mass, "converged": est.converged,
                    }),
                )?;
            } else {
                writeln!(out, "k,radius,mass")?;
                for (k, (r, m)) in est.masses.iter().enumerate() {
                    writeln!(out, "{},{r},{m}", k + 1)?;
                }
                writeln!(out, "# final_mass={},converged={}", est.final_mass, est.converged)?;
            }
            Ok(if est.monotonicity_violations.is_empty() { Status::Pass } else { Status::Fail })
        }

        Command::Curvature { radius, x0, bound } => {
            let x0 = vertex(&oracle, *x0)?;
            let report = curvature_scan(&oracle, x0, *radius)?;
            let pass = bound.is_none_or(|c| report.holds_with(c));
            if json {
                json_out(
                    out,
                    &json!({
                        "graph": spec.to_string(), "root": x0, "radius": radius,
                        "values": report.values, "min": report.min,
                        "max_valence": report.max_valence, "bound": bound, "pass": pass,
                    }),
                )?;
            } else {
                writeln!(out, "vertex,distance,delta_d")?;
                for v in &report.values {
                    writeln!(out, "{},{},{}", v.vertex, v.distance, v.delta_d)?;
                }
                writeln!(out, "# min={},max_valence={}", report.min, report.max_valence)?;
                if let Some(c) = bound {
                    writeln!(out, "# bound={c},{}", if pass { "PASS" } else { "FAIL" })?;
                }
            }
            Ok(if pass { Status::Pass } else { Status::Fail })
        }

        Command::Check {
            suite,
            radius,
            trials,
            horizon,
        } => {
            positive_time(*horizon)?;
            let window = match oracle.vertices() {
                Some(all) => FiniteDomain::from_vertices(&oracle, all)?,
                None => ball(&oracle, oracle.root(), *radius)?,
            };
            let mut reports: Vec<VerificationReport> = Vec::new();
            if matches!(suite, Suite::Identities | Suite::All) {
                reports.extend(identity_suite(&oracle, &window, *trials, config.seed)?);
            }
            if matches!(suite, Suite::MaxPrinciple | Suite::All) {
                reports.push(verify_parabolic_max_principle(&oracle, &window, *trials, *horizon, config.seed)?);
                reports.push(verify_elliptic_trials(&oracle, &window, *trials, config.seed)?);
            }
            let pass = reports.iter().all(|r| r.outcome == Outcome::Pass);
            if json {
                json_out(
                    out,
                    &json!({"graph": spec.to_string(), "seed": config.seed, "pass": pass, "reports": reports}),
                )?;
            } else {
                for r in &reports {
                    let tag = if r.passed() { "PASS" } else { "FAIL" };
                    writeln!(out, "{tag} {} (trials={}, worst margin={:e})", r.check, r.trials, r.worst_margin)?;
                    for v in &r.violations {
                        let at = v.vertex.map_or(String::new(), |x| format!(" at vertex {x}"));
                        let when = v.time.map_or(String::new(), |t| format!(" t={t}"));
                        writeln!(out, "  trial {}{at}{when}: {} (value {:e} > bound {:e})", v.trial, v.message, v.value, v.bound)?;
                    }
                    for n in &r.notes {
                        writeln!(out, "  note: {n}")?;
                    }
                }
                writeln!(out, "{}", if pass { "PASS" } else { "FAIL" })?;
            }
            Ok(if pass { Status::Pass } else { Status::Fail })
        }
    }
}
