//! Geodesic traffic engine.
//!
//! Every unordered pair `{s, t}` exchanges `μ(s)μ(t)` units of traffic,
//! split equally among the `s`–`t` geodesics. A geodesic passes through each
//! of its vertices, endpoints included.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::generators::FamilySpec;
use crate::graph::{Graph, Sweep, UNREACHABLE};
use crate::scalar::{Mode, Scalar};

/// Non-negative node weights with positive total mass.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NodeMeasure {
    weights: Vec<f64>,
    uniform: bool,
}

impl NodeMeasure {
    pub fn uniform(node_count: usize) -> Self {
        Self { weights: vec![1.0; node_count], uniform: true }
    }

    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidMeasure(alloc::format!("weight {w} is not a finite non-negative value")));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(Error::ZeroMass);
        }
        Ok(Self { weights, uniform: false })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn as_scalars<S: Scalar>(&self) -> Vec<S> {
        if self.uniform {
            return vec![S::one(); self.weights.len()];
        }
        self.weights.iter().map(|&w| S::from_weight(w)).collect()
    }

    fn check_for(&self, g: &Graph) -> Result<()> {
        if self.len() != g.node_count() {
            return Err(Error::InvalidMeasure(alloc::format!(
                "measure has {} weights, graph has {} nodes",
                self.len(),
                g.node_count()
            )));
        }
        Ok(())
    }
}

/// Per-node loads `L({v})` and the total traffic `L(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficLoads<S> {
    pub loads: Vec<S>,
    pub total: S,
    pub mode: Mode,
}

impl<S: Scalar> TrafficLoads<S> {
    pub fn proportion(&self, v: usize) -> f64 {
        self.loads[v].to_f64() / self.total.to_f64()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallLoadResult<S> {
    pub center: usize,
    pub radius: u32,
    pub load: S,
    pub proportion: S,
}

/// `Σ_{s<t} μ(s)μ(t) = ((Σμ)² − Σμ²) / 2`.
pub fn total_traffic<S: Scalar>(mu: &NodeMeasure) -> Result<S> {
    let w = mu.as_scalars::<S>();
    let mut mass = S::zero();
    let mut squares = S::zero();
    for x in &w {
        mass += x;
        squares += x.clone() * x.clone();
    }
    if mass.is_zero() {
        return Err(Error::ZeroMass);
    }
    Ok((mass.clone() * mass - squares) / (S::one() + S::one()))
}

/// Exact per-node geodesic traffic by per-source dependency accumulation.
///
/// For a source `s`, `D_s(v) = Σ_{t≠s} μ(t) σ_st(v) / σ_st` satisfies
/// `D_s(v) = μ(v) + Σ_{w : v precedes w} σ_sv / σ_sw · D_s(w)` and
/// `D_s(s) = M − μ(s)`. Ordered pairs are summed over sources in id order
/// and halved at the end.
///
/// Oracle mode runs the same recurrence on integers, see [`exact_loads`].
pub fn node_loads<S: Scalar>(g: &Graph, mu: &NodeMeasure) -> Result<TrafficLoads<S>> {
    g.require_connected()?;
    mu.check_for(g)?;
    let n = g.node_count();
    let total = total_traffic::<S>(mu)?;
    if S::MODE == Mode::Oracle {
        let loads = exact_loads(g, mu).into_iter().map(S::from_rational).collect();
        return Ok(TrafficLoads { loads, total, mode: S::MODE });
    }
    let w = mu.as_scalars::<S>();
    let mass = w.iter().fold(S::zero(), |acc, x| acc + x.clone());

    let mut acc = vec![S::zero(); n];
    let mut dep = vec![S::zero(); n];
    for s in 0..n {
        if w[s].is_zero() {
            continue;
        }
        let sweep = Sweep::<S>::run(g, s, None);
        for d in dep.iter_mut() {
            *d = S::zero();
        }
        for &x in sweep.order.iter().skip(1).rev() {
            dep[x] += &w[x];
            if dep[x].is_zero() {
                continue;
            }
            let dx = sweep.dist[x];
            for v in g.neighbors(x) {
                if v != s && sweep.dist[v] + 1 == dx {
                    let share = dep[x].mul_ratio(&sweep.sigma[v], &sweep.sigma[x]);
                    dep[v] += share;
                }
            }
        }
        dep[s] = mass.clone() - w[s].clone();
        for v in 0..n {
            if !dep[v].is_zero() {
                acc[v] += w[s].clone() * dep[v].clone();
            }
        }
    }
    let two = S::one() + S::one();
    let loads = acc.into_iter().map(|x| x / two.clone()).collect();
    Ok(TrafficLoads { loads, total, mode: S::MODE })
}

/// Integer form of the dependency recurrence.
///
/// Weights are scaled to integers `W = D·μ` by their common (power of two)
/// denominator `D`. For a source with geodesic counts `σ` and `Λ = lcm σ`,
/// `G(x) = Λ W(x) / σ_x + Σ_{x precedes y} G(y)` is an integer and
/// `Λ D · D_s(v) = σ_v G(v)`. Contributions are summed exactly per distinct
/// `Λ` and divided once at the end.
fn exact_loads(g: &Graph, mu: &NodeMeasure) -> Vec<BigRational> {
    let n = g.node_count();
    let weights: Vec<BigRational> = mu.weights().iter().map(|&x| BigRational::from_weight(x)).collect();
    let scale = weights.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let w: Vec<BigInt> = weights.iter().map(|r| r.numer() * (&scale / r.denom())).collect();
    let mass: BigInt = w.iter().sum();

    let mut buckets: BTreeMap<BigInt, Vec<BigInt>> = BTreeMap::new();
    let mut dist = vec![UNREACHABLE; n];
    let mut sigma = vec![BigInt::zero(); n];
    let mut gsum = vec![BigInt::zero(); n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if w[s].is_zero() {
            continue;
        }
        dist.fill(UNREACHABLE);
        sigma.fill(BigInt::zero());
        order.clear();
        dist[s] = 0;
        sigma[s] = BigInt::one();
        order.push(s);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for x in g.neighbors(v) {
                if dist[x] == UNREACHABLE {
                    dist[x] = dist[v] + 1;
                    order.push(x);
                }
                if dist[x] == dist[v] + 1 {
                    let add = sigma[v].clone();
                    sigma[x] += add;
                }
            }
        }
        let lambda = sigma.iter().fold(BigInt::one(), |acc, c| if c.is_one() { acc } else { acc.lcm(c) });
        gsum.fill(BigInt::zero());
        for &x in order.iter().skip(1).rev() {
            if !w[x].is_zero() {
                if lambda.is_one() {
                    gsum[x] += &w[x];
                } else {
                    gsum[x] += &lambda / &sigma[x] * &w[x];
                }
            }
            if gsum[x].is_zero() {
                continue;
            }
            for v in g.neighbors(x) {
                if v != s && dist[v] + 1 == dist[x] {
                    let add = gsum[x].clone();
                    gsum[v] += add;
                }
            }
        }
        let bucket = buckets.entry(lambda.clone()).or_insert_with(|| vec![BigInt::zero(); n]);
        bucket[s] += &w[s] * (&mass - &w[s]) * &lambda;
        for &v in order.iter().skip(1) {
            if !gsum[v].is_zero() {
                bucket[v] += &w[s] * &sigma[v] * &gsum[v];
            }
        }
    }
    let mut loads = vec![BigRational::zero(); n];
    let base = BigInt::from(2) * &scale * &scale;
    for (lambda, bucket) in buckets {
        let denom = &base * &lambda;
        for (l, b) in loads.iter_mut().zip(bucket) {
            if !b.is_zero() {
                *l += BigRational::new(b, denom.clone());
            }
        }
    }
    loads
}

/// Traffic through the ball `B(center, r)`.
///
/// A pair with an endpoint in the ball contributes fully. Any other pair
/// contributes `μ(s)μ(t)(1 − f)`, where `f` is the fraction of its
/// geodesics that avoid the ball: `σ'_st / σ_st` when the distance in
/// `G ∖ B` equals the distance in `G`, and 0 otherwise.
pub fn ball_load<S: Scalar>(g: &Graph, mu: &NodeMeasure, center: usize, r: u32) -> Result<BallLoadResult<S>> {
    g.require_connected()?;
    g.check_node(center)?;
    mu.check_for(g)?;
    let n = g.node_count();
    let w = mu.as_scalars::<S>();
    let total = total_traffic::<S>(mu)?;
    if total.is_zero() {
        return Err(Error::InvalidMeasure("no traffic: fewer than two nodes carry mass".to_string()));
    }
    let ball = g.ball_mask(center, r);

    let mut load = S::zero();
    for s in 0..n {
        if w[s].is_zero() {
            continue;
        }
        let mut touching = S::zero();
        for t in s + 1..n {
            if ball[s] || ball[t] {
                touching += &w[t];
            }
        }
        if !touching.is_zero() {
            load += w[s].clone() * touching;
        }
        if ball[s] {
            continue;
        }
        let full = Sweep::<S>::run(g, s, None);
        let avoid = Sweep::<S>::run(g, s, Some(&ball));
        for t in s + 1..n {
            if ball[t] || w[t].is_zero() {
                continue;
            }
            let pair = w[s].clone() * w[t].clone();
            let hits = if avoid.dist[t] != UNREACHABLE && avoid.dist[t] == full.dist[t] {
                S::one() - avoid.sigma[t].clone() / full.sigma[t].clone()
            } else {
                S::one()
            };
            if !hits.is_zero() {
                load += pair * hits;
            }
        }
    }
    let proportion = load.clone() / total;
    Ok(BallLoadResult { center, radius: r, load, proportion })
}

/// One family member's ball proportion.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeriesPoint {
    pub n: usize,
    pub node_count: usize,
    pub proportion: f64,
}

/// Measure assigned to each family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum MeasureRule {
    #[default]
    Uniform,
}

impl MeasureRule {
    pub fn measure(&self, g: &Graph) -> NodeMeasure {
        match self {
            Self::Uniform => NodeMeasure::uniform(g.node_count()),
        }
    }
}

/// Ball proportion for every member of the family, each computed
/// independently.
pub fn proportion_series(
    family: &FamilySpec,
    rule: MeasureRule,
    center: usize,
    r: u32,
    mode: Mode,
) -> Result<Vec<SeriesPoint>> {
    family.indices().map(|n| family_point(&family.generate(n)?, n, rule, center, r, mode)).collect()
}

pub(crate) fn family_point(
    g: &Graph,
    n: usize,
    rule: MeasureRule,
    center: usize,
    r: u32,
    mode: Mode,
) -> Result<SeriesPoint> {
    let mu = rule.measure(g);
    let proportion = match mode {
        Mode::Fast => ball_load::<f64>(g, &mu, center, r)?.proportion,
        Mode::Oracle => ball_load::<num_rational::BigRational>(g, &mu, center, r)?.proportion.to_f64(),
    };
    Ok(SeriesPoint { n, node_count: g.node_count(), proportion })
}
