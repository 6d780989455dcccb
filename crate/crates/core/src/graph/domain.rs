use std::collections::BTreeMap;

use super::{GraphOracle, PathMetric, VertexId};
use crate::{HeatError, Result};

/// A finite vertex set `U` split into interior and boundary.
///
/// `x` is interior iff all its neighbors lie in `U`. The interior is indexed
/// `0..n` in ascending id order; that index is the coordinate system of the
/// Dirichlet matrices and kernels assembled on the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDomain {
    vertices: Vec<VertexId>,
    interior: Vec<VertexId>,
    boundary: Vec<VertexId>,
    interior_index: BTreeMap<VertexId, usize>,
}

impl FiniteDomain {
    /// Splits an arbitrary finite vertex set.
    ///
    /// Adjacency inside the set is cross-checked in both directions; an
    /// asymmetric oracle is reported as a structural error.
    pub fn from_vertices<I>(oracle: &GraphOracle, vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = VertexId>,
    {
        let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut interior = Vec::new();
        let mut boundary = Vec::new();
        for &x in &vertices {
            let mut inside = true;
            for &y in oracle.neighbors(x)?.iter() {
                if vertices.binary_search(&y).is_ok() {
                    if !oracle.is_adjacent(y, x)? {
                        return Err(HeatError::Structural(format!(
                            "{}: {y} is a neighbor of {x} but not vice versa",
                            oracle.name()
                        )));
                    }
                } else {
                    inside = false;
                }
            }
            if inside {
                interior.push(x);
            } else {
                boundary.push(x);
            }
        }
        let interior_index = interior.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        Ok(FiniteDomain {
            vertices,
            interior,
            boundary,
            interior_index,
        })
    }

    /// The set `U`, ascending.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// The interior `Ů`, ascending.
    pub fn interior(&self) -> &[VertexId] {
        &self.interior
    }

    /// The boundary `∂U = U \ Ů`, ascending.
    pub fn boundary(&self) -> &[VertexId] {
        &self.boundary
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn interior_len(&self) -> usize {
        self.interior.len()
    }

    pub fn contains(&self, x: VertexId) -> bool {
        self.vertices.binary_search(&x).is_ok()
    }

    pub fn is_interior(&self, x: VertexId) -> bool {
        self.interior_index.contains_key(&x)
    }

    /// Position of `x` in the interior ordering.
    pub fn index_of(&self, x: VertexId) -> Option<usize> {
        self.interior_index.get(&x).copied()
    }

    /// The interior vertex with the given index.
    pub fn vertex_at(&self, i: usize) -> VertexId {
        self.interior[i]
    }
}

/// The metric ball `B_radius(center)` with its interior/boundary split.
pub fn ball(oracle: &GraphOracle, center: VertexId, radius: usize) -> Result<FiniteDomain> {
    let metric = PathMetric::new(oracle, center)?;
    FiniteDomain::from_vertices(oracle, metric.ball_vertices(radius)?)
}

/// The exhaustion `B_1(center) ⊂ B_2(center) ⊂ ...` by metric balls.
pub fn exhaustion(oracle: &GraphOracle, center: VertexId) -> Exhaustion<'_> {
    let (metric, error) = match PathMetric::new(oracle, center) {
        Ok(m) => (Some(m), None),
        Err(e) => (None, Some(e)),
    };
    Exhaustion {
        metric,
        error,
        oracle,
        radius: 0,
    }
}

/// Lazy iterator behind [`exhaustion`]. Shares one BFS across all balls.
pub struct Exhaustion<'g> {
    metric: Option<PathMetric<'g>>,
    error: Option<HeatError>,
    oracle: &'g GraphOracle,
    radius: usize,
}

impl<'g> Exhaustion<'g> {
    /// The ball about to be produced next has this radius.
    pub fn next_radius(&self) -> usize {
        self.radius + 1
    }

    /// Jumps ahead so that the next item is `B_radius`.
    pub fn skip_to(&mut self, radius: usize) {
        self.radius = radius.saturating_sub(1);
    }
}

impl Iterator for Exhaustion<'_> {
    type Item = Result<FiniteDomain>;

    fn next(&mut self) -> Option<Self::Item> {
        if let Some(e) = self.error.take() {
            return Some(Err(e));
        }
        let metric = self.metric.as_ref()?;
        self.radius += 1;
        Some(
            metric
                .ball_vertices(self.radius)
                .and_then(|vs| FiniteDomain::from_vertices(self.oracle, vs)),
        )
    }
}
