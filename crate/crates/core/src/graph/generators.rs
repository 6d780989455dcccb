//! Built-in graph families.
//!
//! Every generator assigns ids deterministically:
//!
//! * `path_z`: the integer `z` gets id `2z` for `z ≥ 0` and `-2z - 1` for
//!   `z < 0`, i.e. ids enumerate `0, -1, 1, -2, 2, ...`.
//! * `lattice_z2`: both coordinates are mapped through the `path_z` scheme and
//!   combined with the Cantor pairing `(a + b)(a + b + 1)/2 + b`.
//! * `tree_regular(d)`: level order. The root is `0`, its `d` children are
//!   `1..=d`, and vertex `v ≥ 1` has the `d - 1` children
//!   `d + 1 + (v - 1)(d - 1) ..= d + v(d - 1)`.
//! * `figure1`: row-major. Row `n ≥ 1` holds the `n` ids starting at
//!   `n(n - 1)/2`; every vertex of row `n` is joined to every vertex of rows
//!   `n - 1` and `n + 1`. Hence `x₀ = 0` has valence 2 and a row-`n` vertex
//!   has valence `2n`.
//! * `star_growing(arms)`: `arms` rays leave the root `0`. Layer `k ≥ 1`
//!   holds, for each arm, the ray vertex at depth `k` followed by its `k`
//!   pendant leaves; layers are laid out consecutively, arm by arm.
//!
//! All generators describe connected graphs; that is asserted here, not
//! checked at run time.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EdgeListGraph, GraphOracle, NeighborSource, VertexId};

/// Id of the integer `z` under the interleaving `0, -1, 1, -2, 2, ...`.
pub fn z_to_id(z: i64) -> u64 {
    if z >= 0 {
        2 * z as u64
    } else {
        (-2 * z - 1) as u64
    }
}

/// Inverse of [`z_to_id`].
pub fn id_to_z(id: u64) -> i64 {
    if id % 2 == 0 {
        (id / 2) as i64
    } else {
        -(((id + 1) / 2) as i64)
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn cantor_pair(a: u64, b: u64) -> u64 {
    (a + b) * (a + b + 1) / 2 + b
}

fn cantor_unpair(z: u64) -> (u64, u64) {
    let w = (isqrt(8 * z + 1) - 1) / 2;
    let b = z - w * (w + 1) / 2;
    (w - b, b)
}

/// Id of the lattice point `(i, j)` in `lattice_z2`.
pub fn lattice_id(i: i64, j: i64) -> u64 {
    cantor_pair(z_to_id(i), z_to_id(j))
}

/// Inverse of [`lattice_id`].
pub fn lattice_coords(id: u64) -> (i64, i64) {
    let (a, b) = cantor_unpair(id);
    (id_to_z(a), id_to_z(b))
}

/// `(row, position)` of a `figure1` id, rows counted from 1.
pub fn figure1_row(id: u64) -> (u64, u64) {
    // largest n with n(n-1)/2 <= id
    let mut n = (isqrt(8 * id + 1) + 1) / 2;
    while n * (n - 1) / 2 > id {
        n -= 1;
    }
    while (n + 1) * n / 2 <= id {
        n += 1;
    }
    (n, id - n * (n - 1) / 2)
}

/// Id of the vertex at `position` in `row` (both as in [`figure1_row`]).
pub fn figure1_id(row: u64, position: u64) -> u64 {
    debug_assert!(row >= 1 && position < row);
    row * (row - 1) / 2 + position
}

struct PathZ;

impl NeighborSource for PathZ {
    fn neighbors(&self, x: VertexId) -> Option<Vec<VertexId>> {
        let z = id_to_z(x.0);
        Some(vec![VertexId(z_to_id(z - 1)), VertexId(z_to_id(z + 1))])
    }
}

struct LatticeZ2;

impl NeighborSource for LatticeZ2 {
    fn neighbors(&self, x: VertexId) -> Option<Vec<VertexId>> {
        let (i, j) = lattice_coords(x.0);
        Some(
            [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)]
                .into_iter()
                .map(|(a, b)| VertexId(lattice_id(a, b)))
                .collect(),
        )
    }
}

struct RegularTree {
    degree: u64,
}

impl RegularTree {
    fn children(&self, v: u64) -> std::ops::RangeInclusive<u64> {
        let d = self.degree;
        if v == 0 {
            1..=d
        } else {
            let q = d - 1;
            (d + 1 + (v - 1) * q)..=(d + v * q)
        }
    }

    fn parent(&self, v: u64) -> Option<u64> {
        let d = self.degree;
        match v {
            0 => None,
            v if v <= d => Some(0),
            v => Some((v - d - 1) / (d - 1) + 1),
        }
    }
}

impl NeighborSource for RegularTree {
    fn neighbors(&self, x: VertexId) -> Option<Vec<VertexId>> {
        // degree 1 is the single edge {0, 1}
        if self.degree == 1 && x.0 > 1 {
            return None;
        }
        let mut out: Vec<VertexId> = self.parent(x.0).into_iter().map(VertexId).collect();
        if self.degree > 1 || x.0 == 0 {
            out.extend(self.children(x.0).map(VertexId));
        }
        Some(out)
    }

    fn vertex_count(&self) -> Option<usize> {
        (self.degree == 1).then_some(2)
    }

    fn vertices(&self) -> Option<Vec<VertexId>> {
        (self.degree == 1).then(|| vec![VertexId(0), VertexId(1)])
    }
}

struct Figure1;

impl NeighborSource for Figure1 {
    fn neighbors(&self, x: VertexId) -> Option<Vec<VertexId>> {
        let (row, _) = figure1_row(x.0);
        let mut out = Vec::with_capacity(2 * row as usize);
        if row > 1 {
            out.extend((0..row - 1).map(|p| VertexId(figure1_id(row - 1, p))));
        }
        out.extend((0..row + 1).map(|p| VertexId(figure1_id(row + 1, p))));
        Some(out)
    }
}

struct StarGrowing {
    arms: u64,
}

impl StarGrowing {
    /// First id of layer `k ≥ 1`.
    fn layer_start(&self, k: u64) -> u64 {
        // layer i has arms * (1 + i) vertices
        1 + self.arms * ((k - 1) + (k - 1) * k / 2)
    }

    /// `(layer, arm, slot)`; slot 0 is the ray vertex, slots `1..=layer` are leaves.
    fn locate(&self, id: u64) -> Option<(u64, u64, u64)> {
        if id == 0 {
            return None;
        }
        // solve layer_start(k) <= id; grow an estimate, then walk
        let per = (2 * (id - 1) / self.arms) as f64;
        let mut k = ((per.sqrt() as u64).saturating_sub(1)).max(1);
        while k > 1 && self.layer_start(k) > id {
            k -= 1;
        }
        while self.layer_start(k + 1) <= id {
            k += 1;
        }
        let offset = id - self.layer_start(k);
        Some((k, offset / (k + 1), offset % (k + 1)))
    }

    fn id(&self, layer: u64, arm: u64, slot: u64) -> u64 {
        self.layer_start(layer) + arm * (layer + 1) + slot
    }
}

impl NeighborSource for StarGrowing {
    fn neighbors(&self, x: VertexId) -> Option<Vec<VertexId>> {
        let out = match self.locate(x.0) {
            None => (0..self.arms).map(|a| self.id(1, a, 0)).collect(),
            Some((k, arm, 0)) => {
                let mut out = vec![if k == 1 { 0 } else { self.id(k - 1, arm, 0) }];
                out.push(self.id(k + 1, arm, 0));
                out.extend((1..=k).map(|s| self.id(k, arm, s)));
                out
            }
            Some((k, arm, _)) => vec![self.id(k, arm, 0)],
        };
        Some(out.into_iter().map(VertexId).collect())
    }
}

/// The integer line `ℤ`, rooted at `0`.
pub fn path_z() -> GraphOracle {
    GraphOracle::new("path_z", VertexId(0), PathZ)
}

/// The square lattice `ℤ²`, rooted at the origin.
pub fn lattice_z2() -> GraphOracle {
    GraphOracle::new("lattice_z2", VertexId(lattice_id(0, 0)), LatticeZ2)
}

/// The infinite `degree`-regular tree. `degree` must be at least 1.
pub fn tree_regular(degree: u64) -> GraphOracle {
    assert!(degree >= 1, "tree degree must be positive");
    GraphOracle::new(format!("tree_regular(degree={degree})"), VertexId(0), RegularTree { degree })
}

/// The row graph with unbounded valence and `Δd(·, x₀) = -2`.
pub fn figure1() -> GraphOracle {
    GraphOracle::new("figure1", VertexId(0), Figure1)
}

/// Rays with a growing number of pendant leaves. `arms` must be positive.
pub fn star_growing(arms: u64) -> GraphOracle {
    assert!(arms >= 1, "star_growing needs at least one arm");
    GraphOracle::new(format!("star_growing(arms={arms})"), VertexId(0), StarGrowing { arms })
}

/// A random connected graph on `0..vertices`: a random recursive tree plus
/// each remaining pair independently with probability `extra_edge_prob`.
/// Deterministic in `seed`.
pub fn random_connected(vertices: u64, extra_edge_prob: f64, seed: u64) -> GraphOracle {
    assert!(vertices >= 2, "random_connected needs at least two vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..vertices {
        edges.push((VertexId(rng.random_range(0..v)), VertexId(v)));
    }
    for a in 0..vertices {
        for b in a + 1..vertices {
            if rng.random_bool(extra_edge_prob) {
                edges.push((VertexId(a), VertexId(b)));
            }
        }
    }
    EdgeListGraph::from_edges(edges)
        .and_then(|g| g.into_oracle(format!("random_connected(n={vertices},seed={seed})")))
        .expect("a spanning tree plus extra edges is connected and loop-free")
}
