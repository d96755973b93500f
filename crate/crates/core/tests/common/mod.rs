#![allow(dead_code)]

use corescope::Graph;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

/// Random connected graph: a random labelled spanning tree plus extra edges.
pub fn random_connected(seed: u64, max_nodes: usize) -> Graph {
    let mut rng = SmallRng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_nodes);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    let extra = rng.random_range(0..=n);
    for _ in 0..extra {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        let e = (u.min(v), u.max(v));
        if u != v && !edges.contains(&e) && !edges.contains(&(e.1, e.0)) {
            edges.push(e);
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_tree(seed: u64, n: usize) -> Graph {
    let mut rng = SmallRng::seed_from_u64(seed);
    let edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Floyd–Warshall, independent of the BFS code under test.
pub fn floyd(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.node_count();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for v in 0..n {
        d[v][v] = 0;
        for w in g.neighbors(v) {
            d[v][w] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Every geodesic from `s` to `t` as a vertex sequence.
pub fn all_geodesics(g: &Graph, d: &[Vec<u32>], s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(g: &Graph, d: &[Vec<u32>], t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for w in g.neighbors(v) {
            if d[w][t] + 1 == d[v][t] {
                path.push(w);
                walk(g, d, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(g, d, t, &mut vec![s], &mut out);
    out
}
