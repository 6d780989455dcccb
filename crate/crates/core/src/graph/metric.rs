use std::collections::HashMap;
use std::sync::Mutex;

use super::{GraphOracle, VertexId};
use crate::{HeatError, Result};

/// Lazily extended BFS distances `d(·, source)`.
///
/// Layers are explored on demand; already computed distances never change,
/// so a metric can be shared between threads and queried concurrently.
pub struct PathMetric<'g> {
    oracle: &'g GraphOracle,
    source: VertexId,
    state: Mutex<BfsState>,
}

struct BfsState {
    dist: HashMap<VertexId, usize>,
    /// `layers[r]` holds the vertices at distance exactly `r`, sorted.
    layers: Vec<Vec<VertexId>>,
    exhausted: bool,
}

impl<'g> PathMetric<'g> {
    pub fn new(oracle: &'g GraphOracle, source: VertexId) -> Result<Self> {
        oracle.neighbors(source)?;
        Ok(PathMetric {
            oracle,
            source,
            state: Mutex::new(BfsState {
                dist: HashMap::from([(source, 0)]),
                layers: vec![vec![source]],
                exhausted: false,
            }),
        })
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn oracle(&self) -> &'g GraphOracle {
        self.oracle
    }

    /// Largest radius whose sphere has been fully computed.
    pub fn explored_radius(&self) -> usize {
        self.state.lock().expect("metric poisoned").layers.len() - 1
    }

    fn extend_locked(&self, state: &mut BfsState, radius: usize) -> Result<()> {
        while state.layers.len() <= radius && !state.exhausted {
            let mut next = Vec::new();
            for &x in state.layers.last().expect("layer 0 exists") {
                for &y in self.oracle.neighbors(x)?.iter() {
                    if !state.dist.contains_key(&y) {
                        state.dist.insert(y, state.layers.len());
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                state.exhausted = true;
            } else {
                next.sort_unstable();
                state.layers.push(next);
            }
        }
        Ok(())
    }

    /// Makes sure all spheres up to `radius` are known.
    pub fn extend_to(&self, radius: usize) -> Result<()> {
        let mut state = self.state.lock().expect("metric poisoned");
        self.extend_locked(&mut state, radius)
    }

    /// Exact graph distance from the source, extending the search as needed.
    pub fn distance(&self, x: VertexId) -> Result<usize> {
        let mut state = self.state.lock().expect("metric poisoned");
        loop {
            if let Some(&d) = state.dist.get(&x) {
                return Ok(d);
            }
            if state.exhausted {
                return Err(HeatError::UnknownVertex(x));
            }
            let r = state.layers.len();
            self.extend_locked(&mut state, r)?;
        }
    }

    /// Vertices at distance exactly `r`, ascending.
    pub fn sphere(&self, r: usize) -> Result<Vec<VertexId>> {
        let mut state = self.state.lock().expect("metric poisoned");
        self.extend_locked(&mut state, r)?;
        Ok(state.layers.get(r).cloned().unwrap_or_default())
    }

    /// Vertices at distance at most `r`, ascending.
    pub fn ball_vertices(&self, r: usize) -> Result<Vec<VertexId>> {
        let mut state = self.state.lock().expect("metric poisoned");
        self.extend_locked(&mut state, r)?;
        let mut out: Vec<VertexId> = state.layers.iter().take(r + 1).flatten().copied().collect();
        out.sort_unstable();
        Ok(out)
    }
}
