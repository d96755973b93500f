//! Immutable simple undirected graphs and per-source geodesic data.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Distance value marking an unreachable node.
pub const UNREACHABLE: u32 = u32::MAX;

/// Optional per-node annotations written by the generators.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Labels {
    #[default]
    None,
    /// Depth below the root (node 0) of a rooted tree.
    Depth(Vec<u32>),
    /// Integer coordinates, `dim` entries per node, stored row-major.
    Lattice { dim: usize, coords: Vec<i32> },
    /// Hop layer from the root and polar angle in `[0, 2π)`.
    Tessellation { layer: Vec<u32>, angle: Vec<f64> },
    /// Path graph with ids ordered left to right.
    Path { middle: usize },
}

/// Simple undirected graph in compressed sparse row form.
///
/// Node ids are dense in `[0, node_count)`; every adjacency list is sorted
/// and the relation is symmetric. No self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    labels: Labels,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges (in either orientation) and out-of-range ids. The `line` field
    /// of the errors carries the 1-based position of the offending edge.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut degree = vec![0usize; node_count];
        for (i, &(u, v)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= node_count {
                    return Err(Error::InvalidNode { node: x, node_count });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { line: i + 1, node: u as u64 });
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..node_count].to_vec();
        let mut neighbors = vec![0u32; offsets[node_count]];
        for &(u, v) in edges {
            neighbors[fill[u]] = v as u32;
            fill[u] += 1;
            neighbors[fill[v]] = u as u32;
            fill[v] += 1;
        }
        for u in 0..node_count {
            let adj = &mut neighbors[offsets[u]..offsets[u + 1]];
            adj.sort_unstable();
            if let Some(w) = adj.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0] as usize;
                let line = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| (a, b) == (u, v) || (a, b) == (v, u))
                    .nth(1)
                    .map_or(0, |(i, _)| i + 1);
                return Err(Error::DuplicateEdge { line, u: u as u64, v: v as u64 });
            }
        }
        Ok(Self { offsets, neighbors, labels: Labels::None })
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = labels;
        self
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.neighbors[self.offsets[v]..self.offsets[v + 1]].iter().map(|&w| w as usize)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[self.offsets[u]..self.offsets[u + 1]].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn check_node(&self, v: usize) -> Result<()> {
        if v < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNode { node: v, node_count: self.node_count() })
        }
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() == 0 || self.distances_from(0).iter().all(|&d| d != UNREACHABLE)
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.node_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    pub fn is_tree(&self) -> bool {
        self.node_count() > 0 && self.edge_count() + 1 == self.node_count() && self.is_connected()
    }

    /// Hop distances from `s`; [`UNREACHABLE`] for nodes in other components.
    pub fn distances_from(&self, s: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.node_count()];
        let mut queue = VecDeque::new();
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Row-major `n × n` distance matrix. Errors on disconnected input.
    pub fn distance_matrix(&self) -> Result<Vec<u32>> {
        self.require_connected()?;
        let n = self.node_count();
        let mut out = Vec::with_capacity(n * n);
        for s in 0..n {
            out.extend(self.distances_from(s));
        }
        Ok(out)
    }

    /// Subgraph induced on ids `[0, m)`; labels are dropped.
    pub fn induced_prefix(&self, m: usize) -> Graph {
        let edges: Vec<_> = self.edges().filter(|&(u, v)| u < m && v < m).collect();
        Graph::from_edges(m, &edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Nodes within hop distance `r` of `center`, as a membership mask.
    pub fn ball_mask(&self, center: usize, r: u32) -> Vec<bool> {
        self.distances_from(center).into_iter().map(|d| d <= r).collect()
    }
}

/// Breadth-first sweep from one source, optionally avoiding blocked nodes.
///
/// Predecessors are not stored: `u` precedes `v` iff they are adjacent and
/// `dist[u] + 1 == dist[v]`.
pub(crate) struct Sweep<S> {
    pub dist: Vec<u32>,
    pub sigma: Vec<S>,
    pub order: Vec<usize>,
}

impl<S: Scalar> Sweep<S> {
    pub fn run(g: &Graph, s: usize, blocked: Option<&[bool]>) -> Self {
        let n = g.node_count();
        let mut dist = vec![UNREACHABLE; n];
        let mut sigma = vec![S::zero(); n];
        let mut order = Vec::with_capacity(n);
        dist[s] = 0;
        sigma[s] = S::one();
        order.push(s);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in g.neighbors(v) {
                if blocked.is_some_and(|b| b[w]) {
                    continue;
                }
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[v] + 1;
                    order.push(w);
                }
                if dist[w] == dist[v] + 1 {
                    let add = sigma[v].clone();
                    sigma[w] += add;
                }
            }
        }
        Sweep { dist, sigma, order }
    }
}

/// Distances, geodesic counts and predecessor lists from one source.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicData<S> {
    pub source: usize,
    pub dist: Vec<u32>,
    /// Number of distinct geodesics from `source`. Exact integers when `S`
    /// is rational; `f64` loses precision above 2^53 paths.
    pub sigma: Vec<S>,
    /// Sorted predecessor ids; the first entry is the lexicographically
    /// smallest predecessor.
    pub preds: Vec<Vec<usize>>,
    /// Nodes in non-decreasing distance order.
    pub order: Vec<usize>,
}

pub fn bfs_geodesics<S: Scalar>(g: &Graph, s: usize) -> Result<GeodesicData<S>> {
    g.check_node(s)?;
    let sweep = Sweep::<S>::run(g, s, None);
    if sweep.order.len() != g.node_count() {
        return Err(Error::Disconnected);
    }
    let preds = (0..g.node_count())
        .map(|v| {
            g.neighbors(v).filter(|&u| sweep.dist[u] != UNREACHABLE && sweep.dist[u] + 1 == sweep.dist[v]).collect()
        })
        .collect();
    Ok(GeodesicData { source: s, dist: sweep.dist, sigma: sweep.sigma, preds, order: sweep.order })
}

impl<S: Scalar> GeodesicData<S> {
    /// Canonical geodesic from the source to `t`, following the smallest
    /// predecessor at each step. Returned source-first.
    pub fn canonical_path(&self, t: usize) -> Vec<usize> {
        let mut path = vec![t];
        let mut v = t;
        while v != self.source {
            v = self.preds[v][0];
            path.push(v);
        }
        path.reverse();
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, lattice_box, path};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn exact(v: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    /// Counts monotone lattice paths by brute-force DFS over all
    /// shortest-step walks; independent of the BFS recurrence.
    fn brute_paths(g: &Graph, s: usize, t: usize) -> u64 {
        let dt = g.distances_from(t);
        fn go(g: &Graph, dt: &[u32], v: usize, t: usize) -> u64 {
            if v == t {
                return 1;
            }
            g.neighbors(v).filter(|&w| dt[w] + 1 == dt[v]).map(|w| go(g, dt, w, t)).sum()
        }
        go(g, &dt, s, t)
    }

    #[test]
    fn path_of_three() {
        let g = path(3).unwrap();
        let d = bfs_geodesics::<f64>(&g, 0).unwrap();
        assert_eq!(d.dist, vec![0, 1, 2]);
        assert_eq!(d.sigma, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn four_cycle_has_two_geodesics_to_antipode() {
        let g = cycle(4).unwrap();
        let d = bfs_geodesics::<BigRational>(&g, 0).unwrap();
        assert_eq!(d.sigma[2], exact(2));
        assert_eq!(d.preds[2], vec![1, 3]);
    }

    #[test]
    fn lattice_corner_to_corner() {
        let g = lattice_box(2, 2).unwrap();
        let Labels::Lattice { coords, .. } = g.labels() else { panic!() };
        let find =
            |x: i32, y: i32| (0..g.node_count()).find(|&i| coords[2 * i] == x && coords[2 * i + 1] == y).unwrap();
        let (a, b) = (find(-2, -2), find(2, 2));
        assert_eq!(brute_paths(&g, a, b), 70);
        let d = bfs_geodesics::<BigRational>(&g, a).unwrap();
        assert_eq!(d.sigma[b], exact(70));
    }

    #[test]
    fn sigma_recurrence_holds_everywhere() {
        let g = lattice_box(2, 6).unwrap();
        for s in [0, 17, g.node_count() - 1] {
            let d = bfs_geodesics::<BigRational>(&g, s).unwrap();
            assert_eq!(d.sigma[s], exact(1));
            assert_eq!(d.dist[s], 0);
            for v in 0..g.node_count() {
                if v == s {
                    continue;
                }
                let sum = d.preds[v].iter().fold(BigRational::from_integer(0.into()), |acc, &u| acc + &d.sigma[u]);
                assert_eq!(sum, d.sigma[v]);
                assert!(d.preds[v].iter().all(|&u| d.dist[u] + 1 == d.dist[v]));
            }
        }
    }

    #[test]
    fn disconnected_and_invalid_are_errors() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(bfs_geodesics::<f64>(&g, 0).unwrap_err(), Error::Disconnected);
        assert!(matches!(bfs_geodesics::<f64>(&g, 9), Err(Error::InvalidNode { .. })));
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(matches!(Graph::from_edges(2, &[(1, 1)]), Err(Error::SelfLoop { .. })));
        assert!(matches!(Graph::from_edges(2, &[(0, 1), (1, 0)]), Err(Error::DuplicateEdge { line: 2, .. })));
    }
}
