//! Boundary machinery in the Poincaré disk: the angle/distance relation for
//! geodesics, caps opposite a boundary point, visual histograms of a family
//! member, the base-point-moving Möbius map, and the classification of a
//! limiting boundary measure into single atom, several atoms, or diffuse.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Graph, Labels, UNREACHABLE};
use crate::traffic::NodeMeasure;

const TAU: f64 = 2.0 * PI;

fn normalize_angle(a: f64) -> f64 {
    let r = a % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// Angular separation on the circle, in `[0, π]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

/// Angle `θ ∈ (0, π]` subtended at the origin by a geodesic that passes at
/// hyperbolic distance `R` from it: `sin(θ/2) = 1 / cosh R`.
pub fn theta_of_r(r: f64) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::OutOfRange { what: "R", value: r });
    }
    Ok(2.0 * libm::asin(1.0 / libm::cosh(r)))
}

/// Inverse of [`theta_of_r`]: `R = arccosh(1 / sin(θ/2))`.
pub fn r_of_theta(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::OutOfRange { what: "theta", value: theta });
    }
    Ok(libm::acosh(1.0 / libm::sin(theta / 2.0)).max(0.0))
}

/// Hyperbolic distance from the disk origin to the geodesic joining the
/// boundary points at angles `u` and `v`, computed from the Euclidean
/// circle that carries the geodesic.
///
/// The geodesic lies on the circle through `e^{iu}` and `e^{iv}` that meets
/// the unit circle at right angles; its centre is where the tangent lines at
/// the two points cross. The point of the arc closest to the origin is at
/// Euclidean distance `|c| − ρ`, i.e. hyperbolic distance `2 artanh(|c| − ρ)`.
pub fn geodesic_distance_from_origin(u: f64, v: f64) -> Result<f64> {
    let sep = circle_distance(u, v);
    if sep < 1e-12 {
        return Err(Error::CoincidentAngles);
    }
    let (pu, pv) = (Complex64::from_polar(1.0, u), Complex64::from_polar(1.0, v));
    let denom = 1.0 + (pu * pv.conj()).re;
    if denom < 1e-15 {
        // Antipodal points: the geodesic is a diameter.
        return Ok(0.0);
    }
    let center = (pu + pv) / denom;
    let radius = (center - pu).norm();
    let c = center.norm();
    // |c|² − ρ² over |c| + ρ avoids cancellation when the arc is large.
    let nearest = (c * c - radius * radius) / (c + radius);
    Ok(2.0 * libm::atanh(nearest.clamp(0.0, 1.0)))
}

/// Half-open arc `[start, start + length)` on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Arc {
    pub start: f64,
    pub length: f64,
}

impl Arc {
    pub fn is_empty(&self) -> bool {
        self.length <= 0.0
    }

    pub fn contains(&self, angle: f64) -> bool {
        !self.is_empty()
            && normalize_angle(angle - self.start) < self.length
            && normalize_angle(angle - self.start) > 0.0
    }

    pub fn end(&self) -> f64 {
        normalize_angle(self.start + self.length)
    }
}

/// The cap `E_u^R` of boundary points at angular distance greater than
/// `θ(R)` from `u`: the open arc `(u + θ, u + 2π − θ)`.
pub fn cap_opposite(u: f64, r: f64) -> Result<Arc> {
    let theta = theta_of_r(r)?;
    Ok(Arc { start: normalize_angle(u + theta), length: (TAU - 2.0 * theta).max(0.0) })
}

/// Node placements in the disk: polar angle and hyperbolic radius.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiskEmbedding {
    pub angle: Vec<f64>,
    pub radius: Vec<f64>,
}

/// Tree layout rooted at node 0: children split their parent's angular
/// interval into equal parts (in id order) and sit at the midpoints.
/// Hyperbolic radius is `depth × edge_length`.
pub fn embed_tree(g: &Graph, edge_length: f64) -> Result<DiskEmbedding> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let n = g.node_count();
    let depth = g.distances_from(0);
    let mut lo = vec![0.0; n];
    let mut width = vec![0.0; n];
    let mut angle = vec![0.0; n];
    width[0] = TAU;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (depth[v], v));
    for &v in &order {
        let children: Vec<usize> = g.neighbors(v).filter(|&w| depth[w] == depth[v] + 1).collect();
        let share = width[v] / children.len().max(1) as f64;
        for (i, &c) in children.iter().enumerate() {
            lo[c] = lo[v] + i as f64 * share;
            width[c] = share;
            angle[c] = lo[c] + share / 2.0;
        }
    }
    let radius = depth.iter().map(|&d| d as f64 * edge_length).collect();
    Ok(DiskEmbedding { angle, radius })
}

/// Tessellation layout: layer `k` at hyperbolic radius `k`, angles taken
/// from the generator's labels.
pub fn embed_tessellation(g: &Graph) -> Result<DiskEmbedding> {
    let Labels::Tessellation { layer, angle } = g.labels() else {
        return Err(Error::MissingLabels("tessellation"));
    };
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(DiskEmbedding { angle: angle.clone(), radius: layer.iter().map(|&l| l as f64).collect() })
}

/// Boundary mass binned into `k` equal arcs; arc `i` is
/// `[2πi/k, 2π(i+1)/k)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VisualHistogram {
    pub k: usize,
    pub masses: Vec<f64>,
    /// Family index the histogram was computed from.
    pub n: usize,
}

impl VisualHistogram {
    pub fn arc_of(angle: f64, k: usize) -> usize {
        ((normalize_angle(angle) / TAU * k as f64) as usize).min(k - 1)
    }

    pub fn arc_center(&self, i: usize) -> f64 {
        (2 * i + 1) as f64 * PI / self.k as f64
    }

    pub fn max_mass(&self) -> f64 {
        self.masses.iter().copied().fold(0.0, f64::max)
    }
}

/// Pushes node mass to the boundary along root geodesics.
///
/// Each node takes the direction of the smallest-id frontier node (a node at
/// maximal hop distance from the root) that some root geodesic through it
/// reaches. A node from which no frontier node is reachable keeps its own
/// direction.
pub fn visual_histogram(
    g: &Graph,
    emb: &DiskEmbedding,
    mu: &NodeMeasure,
    k: usize,
    n: usize,
) -> Result<VisualHistogram> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if k < 2 {
        return Err(Error::InvalidParameter(alloc::format!("need at least 2 arcs, got {k}")));
    }
    if emb.angle.len() != g.node_count() || mu.len() != g.node_count() {
        return Err(Error::InvalidParameter("embedding or measure does not cover the graph".into()));
    }
    let dist = g.distances_from(0);
    if dist.contains(&UNREACHABLE) {
        return Err(Error::Disconnected);
    }
    let far = *dist.iter().max().unwrap();
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by_key(|&v| (core::cmp::Reverse(dist[v]), v));
    let mut target: Vec<usize> = (0..g.node_count()).collect();
    for &v in &order {
        if dist[v] == far {
            continue;
        }
        if let Some(best) = g.neighbors(v).filter(|&w| dist[w] == dist[v] + 1).map(|w| target[w]).min() {
            target[v] = best;
        }
    }
    let total: f64 = mu.weights().iter().sum();
    let mut masses = vec![0.0; k];
    for v in 0..g.node_count() {
        masses[VisualHistogram::arc_of(emb.angle[target[v]], k)] += mu.weights()[v] / total;
    }
    Ok(VisualHistogram { k, masses, n })
}

fn check_t(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { what: "t", value: t })
    }
}

/// Angle of `φ_t(e^{iθ})` for the disk automorphism
/// `φ_t(z) = (z − it) / (1 + itz)`, which moves `it` to the origin.
pub fn mobius_boundary_map(t: f64, theta: f64) -> Result<f64> {
    check_t(t)?;
    let z = Complex64::from_polar(1.0, theta);
    let it = Complex64::new(0.0, t);
    let w = (z - it) / (Complex64::new(1.0, 0.0) + it * z);
    Ok(normalize_angle(w.arg()))
}

/// Inverse of [`mobius_boundary_map`]: `z = (w + it) / (1 − itw)`.
pub fn mobius_boundary_map_inverse(t: f64, theta: f64) -> Result<f64> {
    check_t(t)?;
    let w = Complex64::from_polar(1.0, theta);
    let it = Complex64::new(0.0, t);
    let z = (w + it) / (Complex64::new(1.0, 0.0) - it * w);
    Ok(normalize_angle(z.arg()))
}

/// Density, relative to the uniform measure, of the image of the uniform
/// measure under [`mobius_boundary_map`]:
/// `(1 − t²) / (1 + t² + 2t sin θ)`. Largest at `θ = 3π/2`.
pub fn mobius_density(t: f64, theta: f64) -> Result<f64> {
    check_t(t)?;
    Ok((1.0 - t * t) / (1.0 + t * t + 2.0 * t * libm::sin(theta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MeasureClass {
    SingleAtom,
    AtomicMulti,
    Diffuse,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrichotomyConfig {
    /// Strictly increasing arc counts.
    pub k_schedule: Vec<usize>,
    /// An arc with at least this mass counts as an atom.
    pub atom_threshold: f64,
    pub epsilon: f64,
    /// Number of largest family indices that must agree.
    pub window: usize,
}

impl Default for TrichotomyConfig {
    fn default() -> Self {
        Self { k_schedule: vec![8, 32, 128], atom_threshold: 0.1, epsilon: 0.05, window: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArcEvidence {
    pub n: usize,
    pub k: usize,
    pub max_mass: f64,
    pub atoms: usize,
    pub atom_mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrichotomyVerdict {
    pub class: MeasureClass,
    /// `1 − Σ p_i²` over the detected atoms, for [`MeasureClass::AtomicMulti`].
    pub alpha_star: Option<f64>,
    pub evidence: Vec<ArcEvidence>,
}

fn classify_one(
    evidence: &[ArcEvidence],
    masses: &[&VisualHistogram],
    cfg: &TrichotomyConfig,
) -> (MeasureClass, Option<f64>) {
    let finest = evidence.last().expect("non-empty schedule");
    if evidence.iter().all(|e| e.max_mass >= 1.0 - cfg.epsilon) {
        return (MeasureClass::SingleAtom, None);
    }
    let shrinking = evidence.windows(2).all(|w| w[1].max_mass <= w[0].max_mass + 1e-12);
    if finest.max_mass < cfg.epsilon && shrinking {
        return (MeasureClass::Diffuse, None);
    }
    let stable = evidence.iter().all(|e| e.atoms == finest.atoms);
    if finest.atoms >= 2 && stable && evidence.iter().all(|e| e.atom_mass >= 1.0 - cfg.epsilon) {
        let hist = masses.last().unwrap();
        let squares: f64 = hist.masses.iter().filter(|&&m| m >= cfg.atom_threshold).map(|m| m * m).sum();
        return (MeasureClass::AtomicMulti, Some(1.0 - squares));
    }
    (MeasureClass::Inconclusive, None)
}

/// Classifies the limiting boundary measure from histograms at several
/// family indices and arc resolutions.
///
/// For each of the `window` largest indices: single atom if the heaviest arc
/// keeps at least `1 − ε` at every resolution; diffuse if the heaviest arc
/// shrinks under refinement and ends below `ε`; several atoms if the same
/// number (≥ 2) of arcs holds at least `atom_threshold` at every resolution
/// and together they carry `1 − ε`. The indices must agree, otherwise the
/// verdict is inconclusive.
pub fn classify_limit_measure(histograms: &[VisualHistogram], cfg: &TrichotomyConfig) -> Result<TrichotomyVerdict> {
    if cfg.k_schedule.is_empty() || cfg.k_schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("arc schedule must be non-empty and strictly increasing".into()));
    }
    let needed = cfg.window.max(3);
    let mut indices: Vec<usize> = histograms.iter().filter(|h| cfg.k_schedule.contains(&h.k)).map(|h| h.n).collect();
    indices.sort_unstable();
    indices.dedup();
    indices.retain(|&n| cfg.k_schedule.iter().all(|&k| histograms.iter().any(|h| h.n == n && h.k == k)));
    if indices.len() < needed {
        return Err(Error::InsufficientHistograms { needed, got: indices.len() });
    }

    let mut evidence = Vec::new();
    let mut classes = Vec::new();
    for &n in &indices {
        let per_k: Vec<&VisualHistogram> =
            cfg.k_schedule.iter().map(|&k| histograms.iter().find(|h| h.n == n && h.k == k).unwrap()).collect();
        let ev: Vec<ArcEvidence> = per_k
            .iter()
            .map(|h| {
                let atoms: Vec<f64> = h.masses.iter().copied().filter(|&m| m >= cfg.atom_threshold).collect();
                ArcEvidence { n, k: h.k, max_mass: h.max_mass(), atoms: atoms.len(), atom_mass: atoms.iter().sum() }
            })
            .collect();
        classes.push(classify_one(&ev, &per_k, cfg));
        evidence.extend(ev);
    }
    let recent = &classes[classes.len() - cfg.window.max(1)..];
    let (class, alpha_star) = *recent.last().unwrap();
    if recent.iter().any(|(c, _)| *c != class) {
        return Ok(TrichotomyVerdict { class: MeasureClass::Inconclusive, alpha_star: None, evidence });
    }
    Ok(TrichotomyVerdict { class, alpha_star, evidence })
}

/// Discrete `∫ μ(E_u^{r+C}) dμ(u)`: the mass of arc pairs whose centres are
/// further apart than `θ(r + C)`.
pub fn core_upper_bound(hist: &VisualHistogram, r: f64, c: f64) -> Result<f64> {
    let theta = theta_of_r(r + c)?;
    let mut sum = 0.0;
    for i in 0..hist.k {
        if hist.masses[i] == 0.0 {
            continue;
        }
        for j in 0..hist.k {
            if circle_distance(hist.arc_center(i), hist.arc_center(j)) > theta {
                sum += hist.masses[i] * hist.masses[j];
            }
        }
    }
    Ok(sum.clamp(0.0, 1.0))
}

/// Visual metric on the ends of a tree rooted at node 0:
/// `a^{−depth(y)}`, `y` the last common node of the root paths to the two
/// leaves.
pub fn tree_boundary_metric(a: f64, g: &Graph, leaf1: usize, leaf2: usize) -> Result<f64> {
    if !(a > 1.0) {
        return Err(Error::OutOfRange { what: "a", value: a });
    }
    g.check_node(leaf1)?;
    g.check_node(leaf2)?;
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    if leaf1 == leaf2 {
        return Err(Error::CoincidentAngles);
    }
    let depth = g.distances_from(0);
    let parent = |v: usize| g.neighbors(v).find(|&w| depth[w] + 1 == depth[v]).unwrap();
    let (mut x, mut y) = (leaf1, leaf2);
    while depth[x] > depth[y] {
        x = parent(x);
    }
    while depth[y] > depth[x] {
        y = parent(y);
    }
    while x != y {
        x = parent(x);
        y = parent(y);
    }
    Ok(libm::pow(a, -(depth[x] as f64)))
}
