//! Gromov δ estimates from the four-point condition and from slim
//! triangles.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;

use crate::error::Result;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DeltaMethod {
    FourPoint,
    SlimTriangle,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaEstimate {
    /// `2δ`; δ is a half-integer for the four-point condition.
    pub twice_delta: u32,
    pub method: DeltaMethod,
    /// Quadruples or triangles examined.
    pub samples: u64,
    /// Every quadruple (or triangle) was examined.
    pub exhaustive: bool,
}

impl DeltaEstimate {
    pub fn delta(&self) -> f64 {
        self.twice_delta as f64 / 2.0
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Distinct random indices, drawn by rejection. The generator is
/// `rand_xorshift::XorShiftRng` seeded through `SeedableRng::seed_from_u64`,
/// which is bit-reproducible on every platform.
fn sample_distinct<const K: usize>(rng: &mut XorShiftRng, n: usize) -> [usize; K] {
    let mut out = [0usize; K];
    let mut filled = 0;
    while filled < K {
        let x = rng.random_range(0..n);
        if !out[..filled].contains(&x) {
            out[filled] = x;
            filled += 1;
        }
    }
    out
}

struct Distances {
    n: usize,
    d: Vec<u32>,
}

impl Distances {
    fn new(g: &Graph) -> Result<Self> {
        Ok(Self { n: g.node_count(), d: g.distance_matrix()? })
    }

    #[inline]
    fn at(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }

    fn four_point(&self, x: usize, y: usize, z: usize, w: usize) -> u32 {
        let mut s = [self.at(x, y) + self.at(z, w), self.at(x, z) + self.at(y, w), self.at(x, w) + self.at(y, z)];
        s.sort_unstable();
        s[2] - s[1]
    }
}

/// Four-point δ: for each quadruple the largest of the three pair-sums
/// minus the second largest, halved; maximised over quadruples.
///
/// Enumerates every quadruple when `sample_count` covers all of them,
/// otherwise draws `sample_count` random quadruples from `seed`.
pub fn four_point_delta(g: &Graph, sample_count: u64, seed: u64) -> Result<DeltaEstimate> {
    let dist = Distances::new(g)?;
    let n = g.node_count();
    let total = binomial(n as u64, 4);
    let mut best = 0;
    if sample_count >= total {
        for x in 0..n {
            for y in x + 1..n {
                let dxy = dist.at(x, y);
                for z in y + 1..n {
                    let (dxz, dyz) = (dist.at(x, z), dist.at(y, z));
                    let rx = &dist.d[x * n..(x + 1) * n];
                    let ry = &dist.d[y * n..(y + 1) * n];
                    let rz = &dist.d[z * n..(z + 1) * n];
                    for w in z + 1..n {
                        let mut s = [dxy + rz[w], dxz + ry[w], rx[w] + dyz];
                        s.sort_unstable();
                        best = best.max(s[2] - s[1]);
                    }
                }
            }
        }
        return Ok(DeltaEstimate {
            twice_delta: best,
            method: DeltaMethod::FourPoint,
            samples: total,
            exhaustive: true,
        });
    }
    let mut rng = XorShiftRng::seed_from_u64(seed);
    for _ in 0..sample_count {
        let [x, y, z, w] = sample_distinct::<4>(&mut rng, n);
        best = best.max(dist.four_point(x, y, z, w));
    }
    Ok(DeltaEstimate { twice_delta: best, method: DeltaMethod::FourPoint, samples: sample_count, exhaustive: false })
}

/// Canonical geodesic from `a` to `b`: step from `b` towards `a` through the
/// smallest-id neighbour that is one hop closer to `a`.
fn canonical_side(g: &Graph, dist: &Distances, a: usize, b: usize) -> Vec<usize> {
    let mut side = Vec::with_capacity(dist.at(a, b) as usize + 1);
    let mut v = b;
    side.push(v);
    while v != a {
        let dv = dist.at(a, v);
        v = g.neighbors(v).find(|&u| dist.at(a, u) + 1 == dv).expect("connected graph");
        side.push(v);
    }
    side
}

fn triangle_slimness(g: &Graph, dist: &Distances, x: usize, y: usize, z: usize) -> u32 {
    let mut t = [x, y, z];
    t.sort_unstable();
    let sides =
        [canonical_side(g, dist, t[0], t[1]), canonical_side(g, dist, t[1], t[2]), canonical_side(g, dist, t[0], t[2])];
    let mut worst = 0;
    for i in 0..3 {
        for &p in &sides[i] {
            let nearest =
                (0..3).filter(|&j| j != i).flat_map(|j| sides[j].iter()).map(|&o| dist.at(p, o)).min().unwrap_or(0);
            worst = worst.max(nearest);
        }
    }
    worst
}

/// Slim-triangle δ over triangles whose sides are the canonical
/// smallest-predecessor geodesics. The result is a lower bound on the
/// slimness constant, which quantifies over every choice of geodesic.
pub fn slim_triangle_delta(g: &Graph, sample_count: u64, seed: u64) -> Result<DeltaEstimate> {
    let dist = Distances::new(g)?;
    let n = g.node_count();
    let total = binomial(n as u64, 3);
    let mut best = 0;
    if sample_count >= total {
        for x in 0..n {
            for y in x + 1..n {
                for z in y + 1..n {
                    best = best.max(triangle_slimness(g, &dist, x, y, z));
                }
            }
        }
        return Ok(DeltaEstimate {
            twice_delta: 2 * best,
            method: DeltaMethod::SlimTriangle,
            samples: total,
            exhaustive: true,
        });
    }
    let mut rng = XorShiftRng::seed_from_u64(seed);
    for _ in 0..sample_count {
        let [x, y, z] = sample_distinct::<3>(&mut rng, n);
        best = best.max(triangle_slimness(g, &dist, x, y, z));
    }
    Ok(DeltaEstimate {
        twice_delta: 2 * best,
        method: DeltaMethod::SlimTriangle,
        samples: sample_count,
        exhaustive: false,
    })
}
