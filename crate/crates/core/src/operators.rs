//! Finitely supported functions and the operators acting on them.
//!
//! * `Δf(x)   = m(x) f(x) - Σ_{y~x} f(y)` (physical Laplacian)
//! * `Δ_N f   = Δf / m` (normalized Laplacian)
//! * `Af(x)   = Σ_{y~x} f(y)` (adjacency), so that `A = M - Δ`
//! * `df([x,y]) = f(x) - f(y)` (co-boundary), with `(df, dg) = ⟨Δf, g⟩`
//!
//! The Dirichlet Laplacian `Δ_U = π∘Δ∘ι` of a finite domain is assembled as a
//! dense symmetric matrix over the interior index of the domain.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::graph::{FiniteDomain, GraphOracle, VertexId};
use crate::{HeatError, Result};

/// A finitely supported real function on the vertices. Absent means zero.
///
/// Zeros are never stored, so derived equality is equality as functions.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VertexFunction {
    values: BTreeMap<VertexId, f64>,
}

impl VertexFunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// The indicator `δ_x`.
    pub fn delta(x: VertexId) -> Self {
        let mut f = Self::new();
        f.set(x, 1.0);
        f
    }

    pub fn constant_on(vertices: &[VertexId], c: f64) -> Self {
        vertices.iter().map(|&x| (x, c)).collect()
    }

    pub fn get(&self, x: VertexId) -> f64 {
        self.values.get(&x).copied().unwrap_or(0.0)
    }

    /// Overwrites the value at `x`; setting zero removes it from the support.
    pub fn set(&mut self, x: VertexId, value: f64) {
        if value == 0.0 {
            self.values.remove(&x);
        } else {
            self.values.insert(x, value);
        }
    }

    pub fn add_at(&mut self, x: VertexId, value: f64) {
        let v = self.get(x) + value;
        self.set(x, v);
    }

    /// `(vertex, value)` pairs in ascending vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.values.iter().map(|(&x, &v)| (x, v))
    }

    pub fn support(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.values.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `⟨f, g⟩ = Σ_x f(x) g(x)`.
    pub fn dot(&self, other: &VertexFunction) -> f64 {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().map(|(x, v)| v * large.get(x)).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.values.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sum(&self) -> f64 {
        self.values.values().sum()
    }

    pub fn scaled(&self, c: f64) -> VertexFunction {
        self.iter().map(|(x, v)| (x, c * v)).collect()
    }

    pub fn sub(&self, other: &VertexFunction) -> VertexFunction {
        let mut out = self.clone();
        for (x, v) in other.iter() {
            out.add_at(x, -v);
        }
        out
    }

    /// `max(f, 0)`.
    pub fn positive_part(&self) -> VertexFunction {
        self.iter().map(|(x, v)| (x, v.max(0.0))).collect()
    }

    /// `max(-f, 0)`, so that `f = f⁺ - f⁻`.
    pub fn negative_part(&self) -> VertexFunction {
        self.iter().map(|(x, v)| (x, (-v).max(0.0))).collect()
    }

    /// Values at `vertices`, in that order.
    pub fn restrict(&self, vertices: &[VertexId]) -> Vec<f64> {
        vertices.iter().map(|&x| self.get(x)).collect()
    }
}

impl FromIterator<(VertexId, f64)> for VertexFunction {
    fn from_iter<I: IntoIterator<Item = (VertexId, f64)>>(iter: I) -> Self {
        let mut f = VertexFunction::new();
        for (x, v) in iter {
            f.set(x, v);
        }
        f
    }
}

/// An antisymmetric function on oriented edges, `φ([y,x]) = -φ([x,y])`.
///
/// Stored on the canonical orientation `(min, max)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeFunction {
    values: BTreeMap<(VertexId, VertexId), f64>,
}

impl EdgeFunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Value on the oriented edge `[x, y]`.
    pub fn get(&self, x: VertexId, y: VertexId) -> f64 {
        if x < y {
            self.values.get(&(x, y)).copied().unwrap_or(0.0)
        } else {
            -self.values.get(&(y, x)).copied().unwrap_or(0.0)
        }
    }

    /// Sets `φ([x, y]) = value`, and thereby `φ([y, x]) = -value`.
    pub fn set(&mut self, x: VertexId, y: VertexId, value: f64) {
        let (key, v) = if x < y { ((x, y), value) } else { ((y, x), -value) };
        if v == 0.0 {
            self.values.remove(&key);
        } else {
            self.values.insert(key, v);
        }
    }

    /// Canonically oriented `((x, y), φ([x, y]))` with `x < y`.
    pub fn iter(&self) -> impl Iterator<Item = ((VertexId, VertexId), f64)> + '_ {
        self.values.iter().map(|(&e, &v)| (e, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `(φ, ψ) = ½ Σ_{e ∈ E₀} φ(e) ψ(e)`, i.e. the sum over canonical edges.
pub fn edge_inner(phi: &EdgeFunction, psi: &EdgeFunction) -> f64 {
    phi.iter().map(|(e, v)| v * psi.values.get(&e).copied().unwrap_or(0.0)).sum()
}

/// `Δf`.
pub fn laplacian_apply(oracle: &GraphOracle, f: &VertexFunction) -> Result<VertexFunction> {
    let mut acc: BTreeMap<VertexId, f64> = BTreeMap::new();
    for (x, fx) in f.iter() {
        let nbrs = oracle.neighbors(x)?;
        *acc.entry(x).or_insert(0.0) += nbrs.len() as f64 * fx;
        for &y in nbrs.iter() {
            *acc.entry(y).or_insert(0.0) -= fx;
        }
    }
    Ok(acc.into_iter().collect())
}

/// `Δ_N f = Δf / m`.
pub fn normalized_laplacian_apply(oracle: &GraphOracle, f: &VertexFunction) -> Result<VertexFunction> {
    for x in f.support() {
        if oracle.valence(x)? == 0 {
            return Err(HeatError::Structural(format!("isolated vertex {x}")));
        }
    }
    let lap = laplacian_apply(oracle, f)?;
    let mut out = VertexFunction::new();
    for (x, v) in lap.iter() {
        let m = oracle.valence(x)?;
        if m == 0 {
            return Err(HeatError::Structural(format!("isolated vertex {x}")));
        }
        out.set(x, v / m as f64);
    }
    Ok(out)
}

/// `Af(x) = Σ_{y~x} f(y)`.
pub fn adjacency_apply(oracle: &GraphOracle, f: &VertexFunction) -> Result<VertexFunction> {
    let mut acc: BTreeMap<VertexId, f64> = BTreeMap::new();
    for (x, fx) in f.iter() {
        for &y in oracle.neighbors(x)?.iter() {
            *acc.entry(y).or_insert(0.0) += fx;
        }
    }
    Ok(acc.into_iter().collect())
}

/// `Mf(x) = m(x) f(x)`.
pub fn valence_apply(oracle: &GraphOracle, f: &VertexFunction) -> Result<VertexFunction> {
    f.iter()
        .map(|(x, v)| Ok((x, oracle.valence(x)? as f64 * v)))
        .collect()
}

/// `df([x, y]) = f(x) - f(y)` on every edge meeting `supp f`.
pub fn coboundary(oracle: &GraphOracle, f: &VertexFunction) -> Result<EdgeFunction> {
    let mut df = EdgeFunction::new();
    for x in f.support() {
        for &y in oracle.neighbors(x)?.iter() {
            df.set(x, y, f.get(x) - f.get(y));
        }
    }
    Ok(df)
}

/// The Dirichlet Laplacian `Δ_U = π∘Δ∘ι` of a finite domain.
///
/// Diagonal entries are the full valences in the ambient graph, off-diagonal
/// entries are `-1` between adjacent interior vertices.
#[derive(Debug, Clone)]
pub struct DirichletMatrix {
    domain: FiniteDomain,
    entries: DMatrix<f64>,
    valence: Vec<usize>,
    /// Interior neighbors per interior index.
    adjacency: Vec<Vec<usize>>,
}

impl DirichletMatrix {
    pub fn domain(&self) -> &FiniteDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.valence.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Ambient valence of the interior vertex with index `i`.
    pub fn valence(&self, i: usize) -> usize {
        self.valence[i]
    }

    pub fn interior_neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn max_valence(&self) -> usize {
        self.valence.iter().copied().max().unwrap_or(0)
    }

    pub fn trace(&self) -> f64 {
        self.valence.iter().map(|&m| m as f64).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Sparse `Δ_U v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim(), "vector length does not match the interior");
        (0..self.dim())
            .map(|i| self.valence[i] as f64 * v[i] - self.adjacency[i].iter().map(|&j| v[j]).sum::<f64>())
            .collect()
    }
}

/// Assembles `Δ_U` from the adjacency structure of the domain.
pub fn dirichlet_matrix(oracle: &GraphOracle, domain: &FiniteDomain) -> Result<DirichletMatrix> {
    let n = domain.interior_len();
    if n == 0 {
        return Err(HeatError::Domain("no interior vertices".into()));
    }
    let mut entries = DMatrix::zeros(n, n);
    let mut valence = Vec::with_capacity(n);
    let mut adjacency = Vec::with_capacity(n);
    for (i, &x) in domain.interior().iter().enumerate() {
        let nbrs = oracle.neighbors(x)?;
        valence.push(nbrs.len());
        entries[(i, i)] = nbrs.len() as f64;
        let row: Vec<usize> = nbrs.iter().filter_map(|&y| domain.index_of(y)).collect();
        for &j in &row {
            entries[(i, j)] = -1.0;
        }
        adjacency.push(row);
    }
    Ok(DirichletMatrix {
        domain: domain.clone(),
        entries,
        valence,
        adjacency,
    })
}

/// `Δ_U` assembled column by column as `π Δ ι e_j`.
pub fn dirichlet_matrix_by_probe(oracle: &GraphOracle, domain: &FiniteDomain) -> Result<DMatrix<f64>> {
    let n = domain.interior_len();
    if n == 0 {
        return Err(HeatError::Domain("no interior vertices".into()));
    }
    let mut out = DMatrix::zeros(n, n);
    for (j, &x) in domain.interior().iter().enumerate() {
        let col = laplacian_apply(oracle, &VertexFunction::delta(x))?;
        for (y, v) in col.iter() {
            if let Some(i) = domain.index_of(y) {
                out[(i, j)] = v;
            }
        }
    }
    Ok(out)
}

/// `‖Δδ_x‖` for each witness `x`; every value bounds the operator norm of `Δ`
/// from below, and equals `√(m(x)² + m(x))`.
pub fn operator_norm_probe(oracle: &GraphOracle, witnesses: &[VertexId]) -> Result<Vec<f64>> {
    witnesses
        .iter()
        .map(|&x| Ok(laplacian_apply(oracle, &VertexFunction::delta(x))?.norm_l2()))
        .collect()
}
