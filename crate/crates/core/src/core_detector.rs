//! Finite-horizon detection of the asymptotic α-core.
//!
//! A node `y` is in the α-core when some radius `r`, fixed in `n`, keeps
//! `liminf L_n(B(y, r)) / L_n(X_n) ≥ α`. The liminf is estimated by the
//! minimum over the last `tail_window` family members, so every verdict is
//! an estimate at the horizon `n_max`, never a claim about the true limit.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::generators::{FamilyMeta, FamilySpec};
use crate::graph::Graph;
use crate::scalar::Mode;
use crate::traffic::{family_point, MeasureRule, SeriesPoint};

pub const DEFAULT_TAIL_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Centers {
    List(Vec<usize>),
    /// Every node of the smallest family member.
    AllOfSmallest,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoreQuery {
    pub centers: Centers,
    pub radii: Vec<u32>,
    pub alphas: Vec<f64>,
    pub tail_window: usize,
    pub mode: Mode,
    pub rule: MeasureRule,
}

impl CoreQuery {
    pub fn new(centers: Centers, radii: Vec<u32>, alphas: Vec<f64>) -> Result<Self> {
        let q = Self {
            centers,
            radii,
            alphas,
            tail_window: DEFAULT_TAIL_WINDOW,
            mode: Mode::Fast,
            rule: MeasureRule::Uniform,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_tail_window(mut self, t: usize) -> Self {
        self.tail_window = t;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() || self.radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "radii must be non-empty and strictly ascending: {:?}",
                self.radii
            )));
        }
        if let Some(&a) = self.alphas.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
            return Err(Error::OutOfRange { what: "alpha", value: a });
        }
        if self.tail_window == 0 {
            return Err(Error::InvalidParameter("tail window must be >= 1".into()));
        }
        if let Centers::List(c) = &self.centers {
            if c.is_empty() {
                return Err(Error::InvalidParameter("no centers given".into()));
            }
        }
        Ok(())
    }
}

/// Family conditions checked between members `n` and `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FamilyCheck {
    pub n: usize,
    /// `X_n` occupies ids `[0, |X_n|)` of `X_{n+1}` with the same induced
    /// adjacency.
    pub nested: bool,
    /// Hop distance to the root is the same in `X_n` and `X_{n+1}` for every
    /// node of `X_n`, so root geodesics of `X_n` stay inside it.
    pub geodesic_closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub alpha: f64,
    pub in_core: bool,
}

/// Proportion sequence and verdicts for one `(center, radius)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoreCell {
    pub center: usize,
    pub radius: u32,
    pub series: Vec<SeriesPoint>,
    pub liminf_estimate: f64,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoreReport {
    pub family: FamilyMeta,
    /// `(n, |X_n|)` for every member scanned.
    pub node_counts: Vec<(usize, usize)>,
    pub query: CoreQuery,
    pub validation: Vec<FamilyCheck>,
    pub cells: Vec<CoreCell>,
}

impl CoreReport {
    pub fn cell(&self, center: usize, radius: u32) -> Option<&CoreCell> {
        self.cells.iter().find(|c| c.center == center && c.radius == radius)
    }

    pub fn horizon(&self) -> usize {
        self.family.n_max
    }
}

fn check_pair(small: &Graph, big: &Graph, n: usize) -> FamilyCheck {
    let m = small.node_count();
    let nested = m <= big.node_count() && big.induced_prefix(m).edges().eq(small.edges());
    let geodesic_closed = nested && {
        let inner = small.distances_from(0);
        let outer = big.distances_from(0);
        inner.iter().zip(&outer).all(|(a, b)| a == b)
    };
    FamilyCheck { n, nested, geodesic_closed }
}

/// Checks nesting and root-geodesic closure for every consecutive pair of
/// members.
pub fn validate_family(family: &FamilySpec) -> Result<Vec<FamilyCheck>> {
    family.validate()?;
    let mut out = Vec::new();
    let mut prev = family.generate(family.n_min)?;
    for n in family.n_min..family.n_max {
        let next = family.generate(n + 1)?;
        out.push(check_pair(&prev, &next, n));
        prev = next;
    }
    Ok(out)
}

/// Runs the family and fills every `(center, radius)` cell of the query.
pub fn scan(family: &FamilySpec, query: &CoreQuery) -> Result<CoreReport> {
    query.validate()?;
    let validation = validate_family(family)?;
    let smallest = family.generate(family.n_min)?;
    let centers: Vec<usize> = match &query.centers {
        Centers::List(c) => {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if let Some(&bad) = c.iter().find(|&&v| v >= smallest.node_count()) {
                return Err(Error::CenterMissing(bad));
            }
            c
        }
        Centers::AllOfSmallest => (0..smallest.node_count()).collect(),
    };

    let mut cells: Vec<CoreCell> = centers
        .iter()
        .flat_map(|&c| {
            query.radii.iter().map(move |&r| CoreCell {
                center: c,
                radius: r,
                series: Vec::new(),
                liminf_estimate: 0.0,
                verdicts: Vec::new(),
            })
        })
        .collect();
    let mut node_counts = Vec::new();
    for n in family.indices() {
        let g = if n == family.n_min { smallest.clone() } else { family.generate(n)? };
        node_counts.push((n, g.node_count()));
        for cell in cells.iter_mut() {
            cell.series.push(family_point(&g, n, query.rule, cell.center, cell.radius, query.mode)?);
        }
    }
    for cell in cells.iter_mut() {
        let tail = query.tail_window.min(cell.series.len());
        cell.liminf_estimate =
            cell.series[cell.series.len() - tail..].iter().map(|p| p.proportion).fold(f64::INFINITY, f64::min);
        cell.verdicts =
            query.alphas.iter().map(|&alpha| Verdict { alpha, in_core: cell.liminf_estimate >= alpha }).collect();
    }
    Ok(CoreReport { family: family.meta(), node_counts, query: query.clone(), validation, cells })
}

/// A node of `C_α` and the smallest queried radius that puts it there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoreMember {
    pub node: usize,
    pub radius: u32,
}

/// `C_α` restricted to the queried centers and radii.
pub fn alpha_core_set(report: &CoreReport, alpha: f64) -> Result<Vec<CoreMember>> {
    if !report.query.alphas.iter().any(|&a| (a - alpha).abs() <= 1e-12) {
        return Err(Error::AlphaNotCovered(alpha));
    }
    let mut members: Vec<CoreMember> = Vec::new();
    for cell in &report.cells {
        let in_core = cell.verdicts.iter().any(|v| (v.alpha - alpha).abs() <= 1e-12 && v.in_core);
        if !in_core {
            continue;
        }
        match members.iter_mut().find(|m| m.node == cell.center) {
            Some(m) => m.radius = m.radius.min(cell.radius),
            None => members.push(CoreMember { node: cell.center, radius: cell.radius }),
        }
    }
    members.sort_by_key(|m| m.node);
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{BranchingSequence, FamilyKind};
    use alloc::vec;

    fn binary(n_max: usize) -> FamilySpec {
        FamilySpec::new(FamilyKind::BranchingTree(BranchingSequence::constant(2).unwrap()), 1, n_max).unwrap()
    }

    #[test]
    fn binary_tree_root_is_in_core() {
        let q = CoreQuery::new(Centers::List(vec![0]), vec![0], vec![0.4, 0.99]).unwrap();
        let report = scan(&binary(10), &q).unwrap();
        let cell = report.cell(0, 0).unwrap();
        assert!((cell.liminf_estimate - 0.5).abs() < 0.01);
        assert_eq!(cell.verdicts, vec![Verdict { alpha: 0.4, in_core: true }, Verdict { alpha: 0.99, in_core: false }]);
        assert_eq!(alpha_core_set(&report, 0.4).unwrap(), vec![CoreMember { node: 0, radius: 0 }]);
        assert!(alpha_core_set(&report, 0.99).unwrap().is_empty());
        assert_eq!(alpha_core_set(&report, 0.5).unwrap_err(), Error::AlphaNotCovered(0.5));
        assert!(report.validation.iter().all(|c| c.nested && c.geodesic_closed));
    }

    #[test]
    fn larger_balls_reach_higher_alpha() {
        let q = CoreQuery::new(Centers::List(vec![0]), vec![0, 1, 2], vec![0.8]).unwrap();
        let report = scan(&binary(10), &q).unwrap();
        // Pairs missing B(root, r) stay inside one of the 2^(r+1) subtrees
        // below it, so the proportion tends to 1 − 2^-(r+1).
        assert_eq!(alpha_core_set(&report, 0.8).unwrap(), vec![CoreMember { node: 0, radius: 2 }]);
    }

    #[test]
    fn liminf_is_tail_minimum() {
        let q = CoreQuery::new(Centers::AllOfSmallest, vec![0, 1], vec![0.3]).unwrap().with_tail_window(2);
        let report = scan(&binary(7), &q).unwrap();
        assert_eq!(report.cells.len(), 6);
        for cell in &report.cells {
            let tail = &cell.series[cell.series.len() - 2..];
            assert!(tail.iter().all(|p| cell.liminf_estimate <= p.proportion));
            assert!(tail.iter().any(|p| cell.liminf_estimate == p.proportion));
        }
    }

    #[test]
    fn query_validation() {
        assert!(CoreQuery::new(Centers::List(vec![0]), vec![1, 0], vec![0.5]).is_err());
        assert!(CoreQuery::new(Centers::List(vec![0]), vec![0], vec![1.0]).is_err());
        assert!(CoreQuery::new(Centers::List(vec![]), vec![0], vec![0.5]).is_err());
        let q = CoreQuery::new(Centers::List(vec![99]), vec![0], vec![0.5]).unwrap();
        assert_eq!(scan(&binary(3), &q).unwrap_err(), Error::CenterMissing(99));
    }

    #[test]
    fn unnested_file_family_fails_validation() {
        let a = crate::generators::load_edge_list("0 1\n1 2").unwrap();
        // Same node count plus one, but node 0 moved to the far end.
        let b = crate::generators::load_edge_list("0 3\n1 2\n2 3").unwrap();
        let fam = FamilySpec::new(FamilyKind::File(vec![a, b]), 1, 2).unwrap();
        let checks = validate_family(&fam).unwrap();
        assert_eq!(checks.len(), 1);
        assert!(!checks[0].nested);
    }
}
