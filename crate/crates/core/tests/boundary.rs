mod common;

use std::f64::consts::PI;

use corescope::boundary::{
    circle_distance, classify_limit_measure, core_upper_bound, embed_tree, geodesic_distance_from_origin,
    mobius_boundary_map, mobius_density, r_of_theta, tree_boundary_metric, visual_histogram, MeasureClass,
    TrichotomyConfig, VisualHistogram,
};
use corescope::core_detector::{alpha_core_set, scan, Centers, CoreQuery};
use corescope::generators::{branching_tree, BranchingSequence, FamilyKind, FamilySpec};
use corescope::traffic::NodeMeasure;
use corescope::Graph;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

const TAU: f64 = 2.0 * PI;

#[test]
fn lemma_relation_on_random_pairs() {
    let mut rng = SmallRng::seed_from_u64(11);
    for _ in 0..100 {
        let u = rng.random_range(0.0..TAU);
        let v = rng.random_range(0.0..TAU);
        let sep = circle_distance(u, v);
        if sep < 1e-3 {
            continue;
        }
        let r = geodesic_distance_from_origin(u, v).unwrap();
        assert!((r - r_of_theta(sep).unwrap()).abs() < 1e-6, "u={u} v={v}");
    }
    let r = geodesic_distance_from_origin(0.0, PI / 2.0).unwrap();
    assert!((r - 2f64.sqrt().acosh()).abs() < 1e-9);
    assert!((r_of_theta(PI / 2.0).unwrap() - 2f64.sqrt().acosh()).abs() < 1e-9);
}

/// Images of `samples` equally spaced points of the uniform measure.
fn pushforward(t: f64, samples: usize, k: usize) -> Vec<f64> {
    let mut counts = vec![0usize; k];
    for i in 0..samples {
        let th = TAU * (i as f64 + 0.5) / samples as f64;
        counts[VisualHistogram::arc_of(mobius_boundary_map(t, th).unwrap(), k)] += 1;
    }
    counts.iter().map(|&c| c as f64 / samples as f64).collect()
}

fn arc_average_density(t: f64, lo: f64, hi: f64) -> f64 {
    let steps = 256;
    let h = (hi - lo) / steps as f64;
    let f = |x: f64| mobius_density(t, x).unwrap();
    let mut s = f(lo) + f(hi);
    for i in 1..steps {
        s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0 / (hi - lo)
}

#[test]
fn pushforward_has_the_stated_density() {
    let k = 360;
    for t in [0.3, 0.6, 0.9] {
        let masses = pushforward(t, 1_000_000, k);
        for (i, m) in masses.iter().enumerate() {
            let lo = TAU * i as f64 / k as f64;
            let want = arc_average_density(t, lo, lo + TAU / k as f64);
            let got = m * k as f64;
            assert!((got - want).abs() < 1e-2, "t={t} arc {i}: {got} vs {want}");
        }
    }
}

#[test]
fn density_is_normalised() {
    for i in 1..=9 {
        let t = i as f64 / 10.0;
        let steps = 20_000;
        let mean: f64 =
            (0..steps).map(|j| mobius_density(t, TAU * j as f64 / steps as f64).unwrap()).sum::<f64>() / steps as f64;
        assert!((mean - 1.0).abs() < 1e-10, "t={t}: {mean}");
        assert!(mobius_density(t, PI / 2.0).unwrap() < mobius_density(t, 0.0).unwrap());
        assert!(mobius_density(t, 3.0 * PI / 2.0).unwrap() > mobius_density(t, PI).unwrap());
    }
}

#[test]
fn mass_collapses_towards_minus_i() {
    let samples = 1_000_000;
    let inside = (0..samples)
        .filter(|&i| {
            let th = TAU * (i as f64 + 0.5) / samples as f64;
            circle_distance(mobius_boundary_map(0.999, th).unwrap(), 3.0 * PI / 2.0) < 0.1
        })
        .count();
    assert!(inside as f64 / samples as f64 > 0.95);
}

#[test]
fn map_is_continuous_near_zero() {
    let mut prev = mobius_boundary_map(1e-3, 1.0).unwrap();
    for j in 1..10 {
        let t = 1e-3 / (1 << j) as f64;
        let cur = mobius_boundary_map(t, 1.0).unwrap();
        assert!(circle_distance(cur, prev) <= circle_distance(prev, 1.0) + 1e-15);
        prev = cur;
    }
    assert!(circle_distance(prev, 1.0) < 1e-5);
}

#[test]
fn children_stay_inside_parent_intervals() {
    let ks = BranchingSequence::explicit(vec![3, 2, 1, 3, 2]).unwrap();
    let g = branching_tree(&ks, 5).unwrap();
    let emb = embed_tree(&g, 1.0).unwrap();
    let depth = g.distances_from(0);
    // Leaves in id order sweep the circle once.
    let leaves: Vec<usize> = (0..g.node_count()).filter(|&v| depth[v] == 5).collect();
    assert!(leaves.windows(2).all(|w| emb.angle[w[0]] < emb.angle[w[1]]));
    for v in 1..g.node_count() {
        let parent = g.neighbors(v).find(|&w| depth[w] + 1 == depth[v]).unwrap();
        if parent == 0 {
            continue;
        }
        let siblings = g.neighbors(parent).filter(|&w| depth[w] > depth[parent]).count() as f64;
        let span = TAU / ks_product(&[3, 2, 1, 3, 2], depth[parent] as usize);
        assert!((emb.angle[v] - emb.angle[parent]).abs() < span / 2.0, "node {v}");
        assert!(siblings >= 1.0);
    }
}

fn ks_product(ks: &[u64], l: usize) -> f64 {
    ks.iter().take(l).product::<u64>() as f64
}

#[test]
fn histograms_sum_to_one() {
    for seed in 0..20 {
        let g = common::random_tree(seed, 150);
        let emb = embed_tree(&g, 1.0).unwrap();
        let mu = NodeMeasure::from_weights((0..150).map(|v| (v % 7) as f64 + 0.5).collect()).unwrap();
        for k in [2, 8, 33, 128] {
            let h = visual_histogram(&g, &emb, &mu, k, 0).unwrap();
            assert_eq!(h.masses.len(), k);
            assert!((h.masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn balanced_tree_is_nearly_uniform() {
    let g = branching_tree(&BranchingSequence::constant(2).unwrap(), 10).unwrap();
    let emb = embed_tree(&g, 1.0).unwrap();
    let h = visual_histogram(&g, &emb, &NodeMeasure::uniform(g.node_count()), 8, 10).unwrap();
    for m in &h.masses {
        assert!((m - 0.125).abs() < 0.01, "{:?}", h.masses);
    }
}

#[test]
fn path_splits_in_half() {
    let family = FamilySpec::new(FamilyKind::Path, 40, 40).unwrap();
    let g = family.generate(40).unwrap();
    let emb = embed_tree(&g, 1.0).unwrap();
    let h = visual_histogram(&g, &emb, &NodeMeasure::uniform(g.node_count()), 2, 40).unwrap();
    assert!((h.masses[0] - 0.5).abs() < 0.02 && (h.masses[1] - 0.5).abs() < 0.02);
}

#[test]
fn broom_mass_sits_in_the_bush() {
    // Node 1 carries 40 leaves; node 2 starts a path of length 10.
    let mut edges = vec![(0, 1), (0, 2)];
    for leaf in 0..40 {
        edges.push((1, 3 + leaf));
    }
    let mut prev = 2;
    for v in 43..52 {
        edges.push((prev, v));
        prev = v;
    }
    let g = Graph::from_edges(52, &edges).unwrap();
    let emb = embed_tree(&g, 1.0).unwrap();
    let h = visual_histogram(&g, &emb, &NodeMeasure::uniform(52), 8, 0).unwrap();
    let bush: f64 = h.masses[..4].iter().sum();
    assert!(bush > 0.75, "{:?}", h.masses);
}

fn histograms(kind: FamilyKind, ns: std::ops::RangeInclusive<usize>) -> Vec<VisualHistogram> {
    let family = FamilySpec::new(kind, *ns.start(), *ns.end()).unwrap();
    let mut out = Vec::new();
    for n in ns {
        let g = family.generate(n).unwrap();
        let emb = embed_tree(&g, 1.0).unwrap();
        let mu = NodeMeasure::uniform(g.node_count());
        for k in [8, 32, 128] {
            out.push(visual_histogram(&g, &emb, &mu, k, n).unwrap());
        }
    }
    out
}

#[test]
fn trichotomy_on_the_three_model_families() {
    let cfg = TrichotomyConfig::default();
    let binary = FamilyKind::BranchingTree(BranchingSequence::constant(2).unwrap());
    let v = classify_limit_measure(&histograms(binary.clone(), 8..=11), &cfg).unwrap();
    assert_eq!(v.class, MeasureClass::Diffuse);
    let q = CoreQuery::new(Centers::List(vec![0]), vec![0], vec![0.4]).unwrap();
    let report = scan(&FamilySpec::new(binary, 8, 11).unwrap(), &q).unwrap();
    assert_eq!(alpha_core_set(&report, 0.4).unwrap().len(), 1);

    let v = classify_limit_measure(&histograms(FamilyKind::Path, 50..=60), &cfg).unwrap();
    assert_eq!(v.class, MeasureClass::AtomicMulti);
    assert!((v.alpha_star.unwrap() - 0.5).abs() < 0.02);

    let ray = FamilyKind::BranchingTree(BranchingSequence::explicit(vec![1; 64]).unwrap());
    let v = classify_limit_measure(&histograms(ray, 20..=30), &cfg).unwrap();
    assert_eq!(v.class, MeasureClass::SingleAtom);
    assert_eq!(v.alpha_star, None);
}

#[test]
fn too_few_histograms() {
    let h = histograms(FamilyKind::Path, 5..=6);
    assert!(classify_limit_measure(&h, &TrichotomyConfig::default()).is_err());
}

#[test]
fn upper_bound_for_antipodal_atoms() {
    let mut h = VisualHistogram { k: 128, masses: vec![0.0; 128], n: 0 };
    h.masses[10] = 0.5;
    h.masses[74] = 0.5;
    for r in [0.1, 1.0, 3.0] {
        assert!((core_upper_bound(&h, r, 0.0).unwrap() - 0.5).abs() < 1e-15);
    }
    let uniform = VisualHistogram { k: 128, masses: vec![1.0 / 128.0; 128], n: 0 };
    let lo = core_upper_bound(&uniform, 1.0, 0.0).unwrap();
    let hi = core_upper_bound(&uniform, 6.0, 0.0).unwrap();
    assert!(lo < hi && hi > 0.95 && hi <= 1.0);
}

#[test]
fn visual_metric_is_an_ultrametric() {
    let g = branching_tree(&BranchingSequence::constant(3).unwrap(), 6).unwrap();
    let depth = g.distances_from(0);
    let leaves: Vec<usize> = (0..g.node_count()).filter(|&v| depth[v] == 6).collect();
    let mut rng = SmallRng::seed_from_u64(5);
    for _ in 0..500 {
        let pick = |rng: &mut SmallRng| leaves[rng.random_range(0..leaves.len())];
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        if x == y || y == z || x == z {
            continue;
        }
        let d = |a, b| tree_boundary_metric(2.0, &g, a, b).unwrap();
        assert!(d(x, z) <= d(x, y).max(d(y, z)));
    }
}
