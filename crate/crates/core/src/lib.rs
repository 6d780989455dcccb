//! Heat kernels of the physical graph Laplacian on locally finite graphs.
//!
//! The physical Laplacian `Δf(x) = m(x) f(x) - Σ_{y~x} f(y)` is unbounded as
//! soon as the valence `m` is. Its heat kernel on an infinite graph is obtained
//! as the monotone limit of Dirichlet heat kernels on an exhaustion by metric
//! balls `B_1 ⊂ B_2 ⊂ ...`. This crate builds that limit numerically and ships
//! executable checks for the structural facts around it:
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`graph`] | neighbor oracles, generators, BFS metric, balls and exhaustions |
//! | [`operators`] | `Δ`, `Δ_N`, adjacency, co-boundary, Dirichlet matrices |
//! | [`spectral`] | cyclic Jacobi eigensolver and a scaling-and-squaring `expm` oracle |
//! | [`heat`] | finite-domain kernels, exhaustion limits, evolution, semigroup checks |
//! | [`diagnostics`] | maximum principles, curvature scans, stochastic completeness |
//! | [`io`] | edge lists, vertex-function CSV, graph spec strings |
//! | [`cli`] | the `heatgraph` command line front end |
//!
//! ```
//! use heatgraph::graph::generators;
//! use heatgraph::heat::kernel_estimate;
//!
//! let z = generators::path_z();
//! let est = kernel_estimate(&z, 1.0, z.root(), z.root(), 1e-8, 40).unwrap();
//! assert!(est.converged);
//! assert!((est.limit - 0.3085083).abs() < 1e-6);
//! ```

pub mod cli;
pub mod diagnostics;
mod error;
pub mod graph;
pub mod heat;
pub mod io;
pub mod operators;
pub mod spectral;

pub use error::{HeatError, Result};
pub use graph::{FiniteDomain, GraphOracle, PathMetric, VertexId};

pub use heat::{FiniteKernel, KernelEstimate};
pub use operators::{DirichletMatrix, EdgeFunction, VertexFunction};
pub use spectral::SpectralDecomposition;
