//! Hop balls in the vertex-regular `{p,q}` tiling of the hyperbolic plane.
//!
//! Vertices are orientation-preserving isometries of the Poincaré disk,
//! stored as `SU(1,1)` matrices. The root sits at the origin with its first
//! edge along the positive real axis. Neighbour `j` of a vertex `g` is
//! `g ∘ R^j ∘ H`, where `R` rotates by `2π/q` about the origin and `H` is the
//! half-turn about the midpoint of the root's first edge. Both are
//! symmetries of the tiling, so every product is one too, and the local
//! neighbour 0 of every non-root vertex is the vertex it was reached from.
//!
//! Vertices are discovered breadth-first and deduplicated by hyperbolic
//! distance, which makes ids layer-ordered and stable across `layers`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Graph, Labels};

pub fn check_params(p: usize, q: usize) -> Result<()> {
    if p < 3 || q < 3 || (p - 2) * (q - 2) <= 4 {
        return Err(Error::InvalidTessellation { p, q });
    }
    Ok(())
}

/// Hyperbolic length of an edge: `cosh(e/2) = cos(π/p) / sin(π/q)`.
pub fn edge_length(p: usize, q: usize) -> f64 {
    2.0 * libm::acosh(libm::cos(PI / p as f64) / libm::sin(PI / q as f64))
}

/// `z ↦ (a z + b) / (b̄ z + ā)` with `|a|² − |b|² = 1`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Isometry {
    a: Complex64,
    b: Complex64,
}

impl Isometry {
    const IDENTITY: Self = Self { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) };

    fn then(&self, inner: &Self) -> Self {
        let a = self.a * inner.a + self.b * inner.b.conj();
        let b = self.a * inner.b + self.b * inner.a.conj();
        let det = a.norm_sqr() - b.norm_sqr();
        let s = 1.0 / libm::sqrt(det);
        Self { a: a * s, b: b * s }
    }

    /// Image of the origin on the hyperboloid: `(cosh ρ, sinh ρ · e^{iφ})`.
    fn hyperboloid(&self) -> (f64, Complex64) {
        (self.a.norm_sqr() + self.b.norm_sqr(), 2.0 * self.a * self.b)
    }

    /// Image of the origin in the Poincaré disk.
    #[cfg(test)]
    pub(crate) fn origin_image(&self) -> Complex64 {
        self.b / self.a.conj()
    }

    #[cfg(test)]
    pub(crate) fn inverse(&self) -> Self {
        Self { a: self.a.conj(), b: -self.b }
    }

    #[cfg(test)]
    pub(crate) fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }
}

pub(crate) struct Vertex {
    pub iso: Isometry,
    pub layer: u32,
    t: f64,
    x: Complex64,
}

pub(crate) struct Built {
    pub vertices: Vec<Vertex>,
    pub edges: BTreeSet<(usize, usize)>,
}

const CELL: f64 = 0.25;

fn cell_of(x: Complex64) -> (i64, i64) {
    (libm::floor(x.re / CELL) as i64, libm::floor(x.im / CELL) as i64)
}

pub(crate) fn build(p: usize, q: usize, layers: usize, cap: usize) -> Result<Built> {
    check_params(p, q)?;
    let e = edge_length(p, q);
    let rotations: Vec<Isometry> = (0..q)
        .map(|j| Isometry { a: Complex64::from_polar(1.0, PI * j as f64 / q as f64), b: Complex64::new(0.0, 0.0) })
        .collect();
    let half_turn =
        Isometry { a: Complex64::new(0.0, libm::cosh(e / 2.0)), b: Complex64::new(0.0, -libm::sinh(e / 2.0)) };
    let steps: Vec<Isometry> = rotations.iter().map(|r| r.then(&half_turn)).collect();
    // Same vertex iff cosh(d) − 1 is below half the value for one edge.
    let same = (libm::cosh(e) - 1.0) / 2.0;

    let mut vertices = Vec::new();
    let mut cells: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    let mut edges = BTreeSet::new();
    let push = |iso: Isometry, layer: u32, vertices: &mut Vec<Vertex>, cells: &mut BTreeMap<_, Vec<usize>>| {
        let (t, x) = iso.hyperboloid();
        cells.entry(cell_of(x)).or_default().push(vertices.len());
        vertices.push(Vertex { iso, layer, t, x });
        vertices.len() - 1
    };
    push(Isometry::IDENTITY, 0, &mut vertices, &mut cells);

    let mut head = 0;
    while head < vertices.len() {
        let v = head;
        head += 1;
        let (base, layer) = (vertices[v].iso, vertices[v].layer);
        for step in &steps {
            let iso = base.then(step);
            let (t, x) = iso.hyperboloid();
            let (cx, cy) = cell_of(x);
            let mut found = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    for &w in cells.get(&(cx + dx, cy + dy)).map(Vec::as_slice).unwrap_or(&[]) {
                        let cosh_d = t * vertices[w].t - (x * vertices[w].x.conj()).re;
                        if cosh_d - 1.0 < same {
                            found = Some(w);
                            break 'search;
                        }
                    }
                }
            }
            let w = match found {
                Some(w) => w,
                None if (layer as usize) < layers => {
                    if vertices.len() >= cap {
                        return Err(Error::NodeCapExceeded { requested: vertices.len() as u128 + 1, cap });
                    }
                    push(iso, layer + 1, &mut vertices, &mut cells)
                }
                None => continue,
            };
            if w != v {
                edges.insert((v.min(w), v.max(w)));
            }
        }
    }
    Ok(Built { vertices, edges })
}

/// Hop ball of radius `layers` around a vertex of the `{p,q}` tiling.
///
/// Labels carry the hop layer and the polar angle of each vertex in the
/// Poincaré disk. Vertices inside the ball have degree `q`; those on the
/// outermost layer may have fewer.
pub fn tessellation_ball_capped(p: usize, q: usize, layers: usize, cap: usize) -> Result<Graph> {
    let built = build(p, q, layers, cap)?;
    let n = built.vertices.len();
    let edges: Vec<_> = built.edges.into_iter().collect();
    let layer = built.vertices.iter().map(|v| v.layer).collect();
    let angle = built
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i == 0 {
                return 0.0;
            }
            let a = libm::atan2(v.x.im, v.x.re);
            if a < 0.0 {
                a + 2.0 * PI
            } else {
                a
            }
        })
        .collect();
    Ok(Graph::from_edges(n, &edges)?.with_labels(Labels::Tessellation { layer, angle }))
}
