mod common;

use corescope::core_detector::validate_family;
use corescope::generators::{
    branching_tree, lattice_box, load_edge_list, tessellation_ball, BranchingSequence, FamilyKind, FamilySpec,
};
use corescope::{Graph, Labels};
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

fn kinds() -> Vec<FamilyKind> {
    vec![
        FamilyKind::BranchingTree(BranchingSequence::constant(2).unwrap()),
        FamilyKind::BranchingTree(BranchingSequence::constant(3).unwrap()),
        FamilyKind::BranchingTree(BranchingSequence::explicit(vec![3, 1, 2, 1, 2, 2, 1]).unwrap()),
        FamilyKind::LatticeBox { p: 1 },
        FamilyKind::LatticeBox { p: 2 },
        FamilyKind::LatticeBox { p: 3 },
        FamilyKind::TessellationBall { p: 7, q: 3 },
        FamilyKind::TessellationBall { p: 4, q: 5 },
        FamilyKind::TessellationBall { p: 3, q: 7 },
        FamilyKind::Path,
    ]
}

#[test]
fn every_family_is_nested_and_geodesically_closed() {
    for kind in kinds() {
        let family = FamilySpec::new(kind.clone(), 0, 6).unwrap();
        let mut prev: Option<Graph> = None;
        for n in family.indices() {
            let g = family.generate(n).unwrap();
            if let Some(small) = prev {
                let m = small.node_count();
                assert!(m <= g.node_count(), "{kind:?} n={n}");
                for u in 0..m {
                    for v in 0..m {
                        assert_eq!(small.has_edge(u, v), g.has_edge(u, v), "{kind:?} n={n} ({u},{v})");
                    }
                }
                let (a, b) = (small.distances_from(0), g.distances_from(0));
                assert_eq!(a[..], b[..m], "{kind:?} n={n}");
            }
            prev = Some(g);
        }
        assert!(validate_family(&family).unwrap().iter().all(|c| c.nested && c.geodesic_closed));
    }
}

#[test]
fn cycles_are_flagged_as_not_nested() {
    let family = FamilySpec::new(FamilyKind::Cycle, 3, 8).unwrap();
    assert!(validate_family(&family).unwrap().iter().all(|c| !c.nested));
}

#[test]
fn branching_tree_sizes() {
    let mut rng = SmallRng::seed_from_u64(7);
    for _ in 0..20 {
        let depth = rng.random_range(0..7);
        let ks: Vec<u64> = (0..depth).map(|_| rng.random_range(1..5)).collect();
        let g = branching_tree(&BranchingSequence::explicit(ks.clone()).unwrap(), depth).unwrap();
        let mut beta = 1u64;
        let mut want = 1u64;
        for k in &ks {
            beta *= k;
            want += beta;
        }
        assert_eq!(g.node_count() as u64, want, "{ks:?}");
        assert!(g.is_tree());
        let Labels::Depth(d) = g.labels() else { panic!("depth labels") };
        assert_eq!(d, &g.distances_from(0));
    }
}

#[test]
fn lattice_boxes() {
    for p in 1..=3 {
        for n in 0..5 {
            let g = lattice_box(p, n).unwrap();
            let side = 2 * n + 1;
            assert_eq!(g.node_count(), side.pow(p as u32));
            assert_eq!(g.edge_count(), p * (side - 1) * side.pow(p as u32 - 1));
        }
    }
}

#[test]
fn edge_list_round_trip() {
    let g = common::random_connected(3, 20);
    let text: String = g.edges().map(|(u, v)| format!("{u} {v}\n")).collect();
    let back = load_edge_list(&format!("# header\n{text}")).unwrap();
    assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
}

/// Independent {p,q} construction in the hyperboloid model: start from a
/// p-gon centred at the origin and reflect faces across their edges.
mod lorentz {
    use std::f64::consts::PI;

    pub type V3 = [f64; 3];

    fn dot(a: V3, b: V3) -> f64 {
        a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
    }

    pub fn cosh_dist(a: V3, b: V3) -> f64 {
        -dot(a, b)
    }

    fn reflect(x: V3, a: V3, b: V3) -> V3 {
        let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let n = [c[0], c[1], -c[2]];
        let k = 2.0 * dot(x, n) / dot(n, n);
        [x[0] - k * n[0], x[1] - k * n[1], x[2] - k * n[2]]
    }

    struct Store {
        points: Vec<V3>,
    }

    impl Store {
        fn id(&mut self, x: V3) -> usize {
            if let Some(i) = self.points.iter().position(|&y| cosh_dist(x, y) < 1.0 + 1e-6) {
                return i;
            }
            self.points.push(x);
            self.points.len() - 1
        }
    }

    /// Vertices within hyperbolic distance `reach` of a corner of the
    /// central face, with edges; returns (vertices, edges, corner id).
    pub fn tiling(p: usize, q: usize, reach: f64) -> (Vec<V3>, Vec<(usize, usize)>, usize) {
        let rho = ((PI / p as f64).tan().recip() * (PI / q as f64).tan().recip()).acosh();
        let corner = |i: usize| {
            let a = 2.0 * PI * i as f64 / p as f64;
            [rho.sinh() * a.cos(), rho.sinh() * a.sin(), rho.cosh()]
        };
        let origin = [0.0, 0.0, 1.0];
        let root = corner(0);
        let mut faces: Vec<(V3, Vec<V3>)> = vec![(origin, (0..p).map(corner).collect())];
        let mut centres = Store { points: vec![origin] };
        let mut verts = Store { points: Vec::new() };
        let mut edges = Vec::new();
        let mut head = 0;
        while head < faces.len() {
            let (c, corners) = faces[head].clone();
            head += 1;
            let ids: Vec<usize> = corners.iter().map(|&x| verts.id(x)).collect();
            for i in 0..p {
                let (a, b) = (ids[i], ids[(i + 1) % p]);
                edges.push((a.min(b), a.max(b)));
                let nc = reflect(c, corners[i], corners[(i + 1) % p]);
                if cosh_dist(nc, root) > (reach + rho).cosh() {
                    continue;
                }
                let before = centres.points.len();
                if centres.id(nc) == before {
                    faces.push((nc, corners.iter().map(|&x| reflect(x, corners[i], corners[(i + 1) % p])).collect()));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let root_id = verts.points.iter().position(|&y| cosh_dist(root, y) < 1.0 + 1e-6).unwrap();
        (verts.points, edges, root_id)
    }
}

#[test]
fn tessellation_matches_face_reflection_oracle() {
    for (p, q, layers) in [(7, 3, 5), (4, 5, 4), (3, 7, 3), (5, 4, 4), (8, 3, 5)] {
        let e = corescope::tessellation::edge_length(p, q);
        let (verts, edges, root) = lorentz::tiling(p, q, (layers + 1) as f64 * e + 1e-9);
        let oracle = Graph::from_edges(verts.len(), &edges).unwrap();
        let od = oracle.distances_from(root);
        let g = tessellation_ball(p, q, layers).unwrap();
        let gd = g.distances_from(0);
        for l in 0..=layers as u32 {
            let want = od.iter().filter(|&&d| d == l).count();
            let got = gd.iter().filter(|&&d| d == l).count();
            assert_eq!(got, want, "{{{p},{q}}} layer {l}");
        }
        let inside: Vec<usize> = (0..verts.len()).filter(|&v| od[v] <= layers as u32).collect();
        let induced = edges.iter().filter(|(a, b)| inside.contains(a) && inside.contains(b)).count();
        assert_eq!(g.edge_count(), induced, "{{{p},{q}}} edges");
        for v in 0..g.node_count() {
            if gd[v] + 2 <= layers as u32 {
                assert_eq!(g.degree(v), q, "{{{p},{q}}} node {v}");
            }
        }
    }
}

#[test]
fn tessellation_embedding_is_coherent() {
    let g = tessellation_ball(7, 3, 5).unwrap();
    let emb = corescope::boundary::embed_tessellation(&g).unwrap();
    let Labels::Tessellation { layer, .. } = g.labels() else { panic!() };
    for l in 1..5u32 {
        let mut angles: Vec<f64> = (0..g.node_count()).filter(|&v| layer[v] == l).map(|v| emb.angle[v]).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut gap = angles[0] + 2.0 * std::f64::consts::PI - angles[angles.len() - 1];
        for w in angles.windows(2) {
            gap = gap.max(w[1] - w[0]);
        }
        for (u, v) in g.edges() {
            if layer[u] + 1 == l && layer[v] == l || layer[v] + 1 == l && layer[u] == l {
                if layer[u] == 0 || layer[v] == 0 {
                    continue;
                }
                let d = corescope::boundary::circle_distance(emb.angle[u], emb.angle[v]);
                assert!(d < gap, "layer {l}: edge ({u},{v}) spans {d}, gap {gap}");
            }
        }
    }
}
