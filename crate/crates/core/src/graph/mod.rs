//! Locally finite graphs behind a neighbor oracle.
//!
//! Infinite graphs are never materialized. A [`GraphOracle`] wraps a
//! [`NeighborSource`] (a pure function from a vertex to its neighbors) and
//! memoizes the sorted neighbor lists it hands out. Everything downstream
//! only ever touches finite windows: BFS balls, their interiors and the
//! Dirichlet operators assembled on them.

mod domain;
pub mod generators;
mod metric;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::{HeatError, Result};

pub use domain::{ball, exhaustion, Exhaustion, FiniteDomain};
pub use metric::PathMetric;

/// Default cap on the number of distinct vertices an oracle will expand.
pub const DEFAULT_MAX_VERTICES: usize = 200_000;

/// Opaque vertex identifier. Generators document how ids map to vertices.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for VertexId {
    fn from(v: u64) -> Self {
        VertexId(v)
    }
}

/// The raw adjacency rule of a graph.
///
/// Implementations must be pure: the same vertex always yields the same
/// neighbor set. Order and duplicates do not matter, the oracle normalizes.
pub trait NeighborSource: Send + Sync {
    /// Neighbors of `x`, or `None` if `x` is not a vertex of the graph.
    fn neighbors(&self, x: VertexId) -> Option<Vec<VertexId>>;

    /// Number of vertices for finite graphs.
    fn vertex_count(&self) -> Option<usize> {
        None
    }

    /// All vertices in ascending order, for finite graphs.
    fn vertices(&self) -> Option<Vec<VertexId>> {
        None
    }
}

/// A possibly infinite, locally finite, connected graph.
///
/// Neighbor lists are sorted, deduplicated and cached. The cache sits behind
/// a `RwLock`, so concurrent queries are safe.
pub struct GraphOracle {
    name: String,
    root: VertexId,
    source: Box<dyn NeighborSource>,
    memo: RwLock<HashMap<VertexId, Arc<[VertexId]>>>,
    max_vertices: usize,
}

impl fmt::Debug for GraphOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphOracle")
            .field("name", &self.name)
            .field("root", &self.root)
            .field("max_vertices", &self.max_vertices)
            .finish()
    }
}

impl GraphOracle {
    pub fn new(name: impl Into<String>, root: VertexId, source: impl NeighborSource + 'static) -> Self {
        GraphOracle {
            name: name.into(),
            root,
            source: Box::new(source),
            memo: RwLock::new(HashMap::new()),
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }

    /// Caps the number of distinct vertices whose neighborhoods get expanded.
    pub fn with_max_vertices(mut self, limit: usize) -> Self {
        self.max_vertices = limit.max(1);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The designated base vertex `x₀`.
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn max_vertices(&self) -> usize {
        self.max_vertices
    }

    pub fn is_finite(&self) -> bool {
        self.source.vertex_count().is_some()
    }

    pub fn vertex_count(&self) -> Option<usize> {
        self.source.vertex_count()
    }

    pub fn vertices(&self) -> Option<Vec<VertexId>> {
        self.source.vertices()
    }

    pub fn contains(&self, x: VertexId) -> bool {
        self.neighbors(x).is_ok()
    }

    /// Sorted neighbor list of `x`.
    pub fn neighbors(&self, x: VertexId) -> Result<Arc<[VertexId]>> {
        if let Some(hit) = self.memo.read().expect("neighbor memo poisoned").get(&x) {
            return Ok(Arc::clone(hit));
        }
        let mut list = self.source.neighbors(x).ok_or(HeatError::UnknownVertex(x))?;
        list.sort_unstable();
        list.dedup();
        if list.binary_search(&x).is_ok() {
            return Err(HeatError::Structural(format!("self-loop at vertex {x}")));
        }
        let list: Arc<[VertexId]> = list.into();
        let mut memo = self.memo.write().expect("neighbor memo poisoned");
        if memo.len() >= self.max_vertices && !memo.contains_key(&x) {
            return Err(HeatError::ExplorationLimit {
                limit: self.max_vertices,
            });
        }
        Ok(Arc::clone(memo.entry(x).or_insert(list)))
    }

    /// The valence `m(x)`.
    pub fn valence(&self, x: VertexId) -> Result<usize> {
        Ok(self.neighbors(x)?.len())
    }

    pub fn is_adjacent(&self, x: VertexId, y: VertexId) -> Result<bool> {
        Ok(self.neighbors(x)?.binary_search(&y).is_ok())
    }
}

/// A finite graph stored as a sorted adjacency map.
#[derive(Debug, Clone, Default)]
pub struct EdgeListGraph {
    adjacency: BTreeMap<VertexId, Vec<VertexId>>,
}

impl EdgeListGraph {
    /// Builds an undirected simple graph. Duplicate edges (in either
    /// orientation) collapse; self-loops are rejected.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut adjacency: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for (u, v) in edges {
            if u == v {
                return Err(HeatError::Structural(format!("self-loop at vertex {u}")));
            }
            adjacency.entry(u).or_default().push(v);
            adjacency.entry(v).or_default().push(u);
        }
        for list in adjacency.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Ok(EdgeListGraph { adjacency })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    /// Canonically oriented edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.adjacency
            .iter()
            .flat_map(|(&u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.adjacency.keys().next() else {
            return true;
        };
        let mut seen = std::collections::HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adjacency[&x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() == self.adjacency.len()
    }

    /// Wraps the graph in an oracle rooted at its smallest vertex id.
    ///
    /// Fails on empty or disconnected graphs.
    pub fn into_oracle(self, name: impl Into<String>) -> Result<GraphOracle> {
        let root = *self
            .adjacency
            .keys()
            .next()
            .ok_or_else(|| HeatError::Structural("graph has no edges".into()))?;
        if !self.is_connected() {
            return Err(HeatError::Structural("graph is not connected".into()));
        }
        Ok(GraphOracle::new(name, root, self))
    }
}

impl NeighborSource for EdgeListGraph {
    fn neighbors(&self, x: VertexId) -> Option<Vec<VertexId>> {
        self.adjacency.get(&x).cloned()
    }

    fn vertex_count(&self) -> Option<usize> {
        Some(self.adjacency.len())
    }

    fn vertices(&self) -> Option<Vec<VertexId>> {
        Some(self.adjacency.keys().copied().collect())
    }
}
