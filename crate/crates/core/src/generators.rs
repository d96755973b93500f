//! Graph families with stable node identities across growing `n`.
//!
//! Every generator numbers nodes so that the member for `n` is an id-prefix
//! of the member for `n + 1`, with identical induced adjacency. Node 0 is
//! always the base point (tree root, lattice origin, tessellation root).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Labels};
use crate::tessellation;

/// Default bound on generated node counts.
pub const DEFAULT_NODE_CAP: usize = 2_000_000;

/// Branching numbers `k_1, k_2, …` of a rooted tree (`k_0 = 1` implied).
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BranchingSequence {
    /// `k_l = k` for every `l ≥ 1`: the `(k+1)`-regular tree.
    Constant(u64),
    /// Finite prefix; depths beyond it are an error.
    Explicit(Vec<u64>),
}

impl BranchingSequence {
    pub fn constant(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidBranching(format!("constant k must be >= 2, got {k}")));
        }
        Ok(Self::Constant(k))
    }

    pub fn explicit(ks: Vec<u64>) -> Result<Self> {
        if let Some(pos) = ks.iter().position(|&k| k == 0) {
            return Err(Error::InvalidBranching(format!("k_{} = 0", pos + 1)));
        }
        Ok(Self::Explicit(ks))
    }

    /// `k_l`, with `k_0 = 1`. `None` past the end of an explicit prefix.
    pub fn k(&self, l: usize) -> Option<u64> {
        match (self, l) {
            (_, 0) => Some(1),
            (Self::Constant(k), _) => Some(*k),
            (Self::Explicit(ks), l) => ks.get(l - 1).copied(),
        }
    }

    /// Checks that `k_1..=k_depth` exist and are valid.
    pub fn check_depth(&self, depth: usize) -> Result<()> {
        match self {
            Self::Constant(k) if *k < 2 => Err(Error::InvalidBranching(format!("constant k must be >= 2, got {k}"))),
            Self::Constant(_) => Ok(()),
            Self::Explicit(ks) => {
                if let Some(pos) = ks.iter().position(|&k| k == 0) {
                    return Err(Error::InvalidBranching(format!("k_{} = 0", pos + 1)));
                }
                if ks.len() < depth {
                    return Err(Error::InvalidBranching(format!(
                        "depth {depth} needs {depth} branching numbers, sequence has {}",
                        ks.len()
                    )));
                }
                Ok(())
            }
        }
    }
}

fn cap_check(requested: u128, cap: usize) -> Result<usize> {
    if requested > cap as u128 {
        Err(Error::NodeCapExceeded { requested, cap })
    } else {
        Ok(requested as usize)
    }
}

pub fn branching_tree(ks: &BranchingSequence, n: usize) -> Result<Graph> {
    branching_tree_capped(ks, n, DEFAULT_NODE_CAP)
}

/// Rooted tree of depth `n`, ids assigned breadth-first.
pub fn branching_tree_capped(ks: &BranchingSequence, n: usize, cap: usize) -> Result<Graph> {
    ks.check_depth(n)?;
    let mut total: u128 = 1;
    let mut level: u128 = 1;
    for l in 1..=n {
        level = level.saturating_mul(ks.k(l).unwrap() as u128);
        total = total.saturating_add(level);
        cap_check(total, cap)?;
    }
    let total = total as usize;
    let mut edges = Vec::with_capacity(total.saturating_sub(1));
    let mut depth = Vec::with_capacity(total);
    depth.push(0u32);
    let (mut level_start, mut level_end) = (0usize, 1usize);
    for l in 1..=n {
        let k = ks.k(l).unwrap() as usize;
        let mut next = level_end;
        for parent in level_start..level_end {
            for _ in 0..k {
                edges.push((parent, next));
                depth.push(l as u32);
                next += 1;
            }
        }
        level_start = level_end;
        level_end = next;
    }
    Ok(Graph::from_edges(total, &edges)?.with_labels(Labels::Depth(depth)))
}

pub fn lattice_box(p: usize, n: usize) -> Result<Graph> {
    lattice_box_capped(p, n, DEFAULT_NODE_CAP)
}

/// The box `{-n..n}^p` with nearest-neighbour edges.
///
/// Ids are radially layered: all points with Chebyshev norm `m` come after
/// those with norm `< m`, lexicographic within a layer. The origin is 0.
pub fn lattice_box_capped(p: usize, n: usize, cap: usize) -> Result<Graph> {
    if p == 0 {
        return Err(Error::InvalidParameter("lattice dimension p must be >= 1".to_string()));
    }
    let side = 2 * n + 1;
    let count = (side as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
    let count = cap_check(count, cap)?;

    // Mixed-radix index over the box in lexicographic order.
    let coords_of = |mut idx: usize| {
        let mut c = vec![0i32; p];
        for slot in c.iter_mut().rev() {
            *slot = (idx % side) as i32 - n as i32;
            idx /= side;
        }
        c
    };
    let mut lex: Vec<usize> = (0..count).collect();
    lex.sort_by_key(|&i| coords_of(i).iter().map(|c| c.unsigned_abs()).max().unwrap_or(0));
    let mut id_of = vec![0usize; count];
    let mut coords = Vec::with_capacity(count * p);
    for (id, &i) in lex.iter().enumerate() {
        id_of[i] = id;
        coords.extend(coords_of(i));
    }
    let mut edges = Vec::with_capacity(count * p);
    let mut stride = 1usize;
    for _axis in 0..p {
        for i in 0..count {
            let c = (i / stride) % side;
            if c + 1 < side {
                edges.push((id_of[i], id_of[i + stride]));
            }
        }
        stride *= side;
    }
    Ok(Graph::from_edges(count, &edges)?.with_labels(Labels::Lattice { dim: p, coords }))
}

pub fn tessellation_ball(p: usize, q: usize, layers: usize) -> Result<Graph> {
    tessellation::tessellation_ball_capped(p, q, layers, DEFAULT_NODE_CAP)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// Path on `n` nodes, ids left to right; the middle node is recorded in the
/// labels.
pub fn path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParameter("path needs n >= 1".to_string()));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(Graph::from_edges(n, &edges)?.with_labels(Labels::Path { middle: (n - 1) / 2 }))
}

/// Parses the edge-list text format: one whitespace-separated id pair per
/// line, `#` starts a comment. Ids are compacted to a dense range in
/// ascending order of the original values.
pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut raw = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected two node ids, found {} tokens", tokens.len()),
            });
        }
        let parse = |t: &str| {
            t.parse::<u64>().map_err(|_| Error::Parse { line: line_no, message: format!("invalid node id {t:?}") })
        };
        let (u, v) = (parse(tokens[0])?, parse(tokens[1])?);
        if u == v {
            return Err(Error::SelfLoop { line: line_no, node: u });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge { line: line_no, u, v });
        }
        raw.push((u, v));
    }
    let ids: BTreeMap<u64, usize> = raw
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, id)| (id, i))
        .collect();
    let edges: Vec<_> = raw.iter().map(|(u, v)| (ids[u], ids[v])).collect();
    Graph::from_edges(ids.len(), &edges)
}

/// Kind-specific parameters of a growing family.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    BranchingTree(BranchingSequence),
    /// `X_n = {-n..n}^p`.
    LatticeBox {
        p: usize,
    },
    /// `X_n` = hop ball of radius `n` in the `{p,q}` tiling.
    TessellationBall {
        p: usize,
        q: usize,
    },
    /// `X_n` = cycle on `n` nodes. Not nested; useful as a negative control.
    Cycle,
    /// `X_n` = path on `2n + 1` nodes centred at node 0.
    Path,
    /// Pre-loaded graphs, one per index starting at `n_min`.
    File(Vec<Graph>),
}

/// A parametric growing family `X_{n_min} ⊂ … ⊂ X_{n_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n_min: usize,
    pub n_max: usize,
    pub node_cap: usize,
}

/// Printable description of a family, for reports.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyMeta {
    pub kind: String,
    pub parameters: Vec<(String, String)>,
    pub n_min: usize,
    pub n_max: usize,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n_min: usize, n_max: usize) -> Result<Self> {
        let spec = Self { kind, n_min, n_max, node_cap: DEFAULT_NODE_CAP };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min > self.n_max {
            return Err(Error::InvalidParameter(format!("empty family range {}..={}", self.n_min, self.n_max)));
        }
        match &self.kind {
            FamilyKind::BranchingTree(ks) => ks.check_depth(self.n_max),
            FamilyKind::LatticeBox { p } if *p == 0 => {
                Err(Error::InvalidParameter("lattice dimension p must be >= 1".to_string()))
            }
            FamilyKind::TessellationBall { p, q } => tessellation::check_params(*p, *q),
            FamilyKind::Cycle if self.n_min < 3 => {
                Err(Error::InvalidParameter(format!("cycle family needs n >= 3, got {}", self.n_min)))
            }
            FamilyKind::File(graphs) if graphs.len() != self.n_max - self.n_min + 1 => {
                Err(Error::InvalidParameter(format!(
                    "file family over {}..={} needs {} graphs, got {}",
                    self.n_min,
                    self.n_max,
                    self.n_max - self.n_min + 1,
                    graphs.len()
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn indices(&self) -> core::ops::RangeInclusive<usize> {
        self.n_min..=self.n_max
    }

    pub fn generate(&self, n: usize) -> Result<Graph> {
        if !self.indices().contains(&n) {
            return Err(Error::InvalidParameter(format!("index {n} outside {}..={}", self.n_min, self.n_max)));
        }
        let cap = self.node_cap;
        match &self.kind {
            FamilyKind::BranchingTree(ks) => branching_tree_capped(ks, n, cap),
            FamilyKind::LatticeBox { p } => lattice_box_capped(*p, n, cap),
            FamilyKind::TessellationBall { p, q } => tessellation::tessellation_ball_capped(*p, *q, n, cap),
            FamilyKind::Cycle => {
                cap_check(n as u128, cap)?;
                cycle(n)
            }
            FamilyKind::Path => lattice_box_capped(1, n, cap),
            FamilyKind::File(graphs) => {
                let g = graphs[n - self.n_min].clone();
                cap_check(g.node_count() as u128, cap)?;
                Ok(g)
            }
        }
    }

    pub fn meta(&self) -> FamilyMeta {
        let (kind, parameters): (&str, Vec<(&str, String)>) = match &self.kind {
            FamilyKind::BranchingTree(BranchingSequence::Constant(k)) => {
                ("branching_tree", vec![("k", format!("{k}"))])
            }
            FamilyKind::BranchingTree(BranchingSequence::Explicit(ks)) => {
                let list: Vec<String> = ks.iter().map(|k| format!("{k}")).collect();
                ("branching_tree", vec![("ks", list.join(","))])
            }
            FamilyKind::LatticeBox { p } => ("lattice_box", vec![("p", format!("{p}"))]),
            FamilyKind::TessellationBall { p, q } => {
                ("tessellation_ball", vec![("p", format!("{p}")), ("q", format!("{q}"))])
            }
            FamilyKind::Cycle => ("cycle", vec![]),
            FamilyKind::Path => ("path", vec![]),
            FamilyKind::File(graphs) => ("file", vec![("members", format!("{}", graphs.len()))]),
        };
        FamilyMeta {
            kind: kind.to_string(),
            parameters: parameters.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            n_min: self.n_min,
            n_max: self.n_max,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_tree_depth_three() {
        let g = branching_tree(&BranchingSequence::constant(2).unwrap(), 3).unwrap();
        assert_eq!(g.node_count(), 15);
        assert!(g.is_tree());
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn tree_depth_zero_is_root_only() {
        let g = branching_tree(&BranchingSequence::explicit(vec![3, 2]).unwrap(), 0).unwrap();
        assert_eq!(g.node_count(), 1);
    }

    #[test]
    fn explicit_sequence_counts() {
        let ks = BranchingSequence::explicit(vec![3, 2]).unwrap();
        assert_eq!(branching_tree(&ks, 2).unwrap().node_count(), 10);
        assert!(matches!(branching_tree(&ks, 3), Err(Error::InvalidBranching(_))));
        assert!(BranchingSequence::constant(1).is_err());
        assert!(BranchingSequence::explicit(vec![2, 0]).is_err());
    }

    #[test]
    fn lattice_small_cases() {
        let line = lattice_box(1, 2).unwrap();
        assert_eq!(line.node_count(), 5);
        assert_eq!(line.edge_count(), 4);
        assert!(line.is_tree());
        let grid = lattice_box(2, 1).unwrap();
        assert_eq!((grid.node_count(), grid.edge_count()), (9, 12));
        assert_eq!(grid.degree(0), 4);
        for n in 0..5 {
            assert_eq!(lattice_box(2, n).unwrap().node_count(), (2 * n + 1).pow(2));
        }
    }

    #[test]
    fn lattice_cap_is_enforced() {
        assert!(matches!(lattice_box_capped(3, 10, 1000), Err(Error::NodeCapExceeded { .. })));
    }

    #[test]
    fn cycle_and_path_controls() {
        assert_eq!(path(5).unwrap().labels(), &Labels::Path { middle: 2 });
        let c = cycle(4).unwrap();
        assert!((0..4).all(|v| c.degree(v) == 2));
        let p = path(9).unwrap();
        assert_eq!(p.distances_from(0).into_iter().max(), Some(8));
        assert!(cycle(2).is_err());
        assert!(path(0).is_err());
    }

    #[test]
    fn edge_list_parsing() {
        let g = load_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g, path(3).unwrap().with_labels(Labels::None));
        assert_eq!(load_edge_list("0 0").unwrap_err(), Error::SelfLoop { line: 1, node: 0 });
        assert_eq!(load_edge_list("0 1\n0 1").unwrap_err(), Error::DuplicateEdge { line: 2, u: 0, v: 1 });
        assert!(matches!(load_edge_list("0 1\n2 x").unwrap_err(), Error::Parse { line: 2, .. }));
        let g = load_edge_list("# header\n10 30  # tail\n\n30 20\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert!(g.has_edge(0, 2) && g.has_edge(1, 2));
    }
}
