use std::fmt::Write as _;

use corescope::boundary::{
    classify_limit_measure, core_upper_bound, embed_tessellation, embed_tree, visual_histogram, DiskEmbedding,
};
use corescope::core_detector::{scan, Centers, CoreQuery};
use corescope::generators::FamilyKind;
use corescope::hyperbolicity::{four_point_delta, slim_triangle_delta, DeltaEstimate};
use corescope::traffic::{ball_load, node_loads, NodeMeasure};
use corescope::{Graph, Mode, Scalar};
use num_rational::BigRational;
use serde::Serialize;

use crate::config::{Command, DeltaChoice, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{self, num, UpperBound, VerdictFile};

pub fn run(cfg: &RunConfig) -> Result<()> {
    let dir = cfg.out_dir();
    output::write_file(&dir, "config.txt", &cfg.echo())?;
    match cfg.command {
        Command::Generate => generate(cfg),
        Command::Traffic => traffic(cfg),
        Command::CoreScan => core_scan(cfg),
        Command::Boundary => boundary(cfg),
        Command::Hyperbolicity => hyperbolicity(cfg),
    }
}

#[derive(Serialize)]
struct GraphSummary {
    family: Option<corescope::generators::FamilyMeta>,
    n: Option<usize>,
    node_count: usize,
    edge_count: usize,
}

fn single_graph(cfg: &RunConfig) -> Result<(Graph, GraphSummary)> {
    if let Some(path) = cfg.input() {
        let g = crate::load_graph(&path)?;
        if g.node_count() > cfg.node_cap()? {
            return Err(CliError::Cap(format!("input has {} nodes, cap is {}", g.node_count(), cfg.node_cap()?)));
        }
        let summary = GraphSummary { family: None, n: None, node_count: g.node_count(), edge_count: g.edge_count() };
        return Ok((g, summary));
    }
    let spec = cfg.family_spec()?;
    let n = cfg.usize_key("n")?;
    let g = spec.generate(n)?;
    let summary =
        GraphSummary { family: Some(spec.meta()), n: Some(n), node_count: g.node_count(), edge_count: g.edge_count() };
    Ok((g, summary))
}

fn generate(cfg: &RunConfig) -> Result<()> {
    let (g, summary) = single_graph(cfg)?;
    let mut s = format!("# {} nodes, {} edges\n", g.node_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    let dir = cfg.out_dir();
    output::write_file(&dir, "edges.txt", &s)?;
    output::write_json(&dir, "summary.json", &summary)
}

fn traffic(cfg: &RunConfig) -> Result<()> {
    let (g, summary) = single_graph(cfg)?;
    let mu = NodeMeasure::uniform(g.node_count());
    let centers = match cfg.centers()? {
        Centers::List(c) => c,
        Centers::AllOfSmallest => (0..g.node_count()).collect(),
    };
    let radii = cfg.radii()?;
    let to_f = |x: BigRational| Scalar::to_f64(&x);
    let (loads, total): (Vec<f64>, f64) = match cfg.mode() {
        Mode::Fast => {
            let l = node_loads::<f64>(&g, &mu)?;
            (l.loads, l.total)
        }
        Mode::Oracle => {
            let l = node_loads::<BigRational>(&g, &mu)?;
            (l.loads.into_iter().map(to_f).collect(), to_f(l.total))
        }
    };
    let mut s = String::from("node,load,proportion\n");
    for (v, l) in loads.iter().enumerate() {
        let _ = writeln!(s, "{v},{},{}", num(*l), num(l / total));
    }
    let mut b = String::from("center,radius,load,proportion\n");
    for &c in &centers {
        for &r in &radii {
            let (load, p) = match cfg.mode() {
                Mode::Fast => {
                    let x = ball_load::<f64>(&g, &mu, c, r)?;
                    (x.load, x.proportion)
                }
                Mode::Oracle => {
                    let x = ball_load::<BigRational>(&g, &mu, c, r)?;
                    (to_f(x.load), to_f(x.proportion))
                }
            };
            let _ = writeln!(b, "{c},{r},{},{}", num(load), num(p));
        }
    }
    let dir = cfg.out_dir();
    output::write_file(&dir, "loads.csv", &s)?;
    output::write_file(&dir, "balls.csv", &b)?;
    #[derive(Serialize)]
    struct TrafficSummary {
        graph: GraphSummary,
        mode: Mode,
        total_traffic: f64,
    }
    output::write_json(&dir, "summary.json", &TrafficSummary { graph: summary, mode: cfg.mode(), total_traffic: total })
}

fn core_scan(cfg: &RunConfig) -> Result<()> {
    let spec = cfg.family_spec()?;
    let query = CoreQuery::new(cfg.centers()?, cfg.radii()?, cfg.alphas()?)
        .map_err(|e| CliError::Usage(e.to_string()))?
        .with_tail_window(cfg.usize_key("tail")?)
        .with_mode(cfg.mode());
    query.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let report = scan(&spec, &query)?;
    output::write_core_report(&report, &cfg.out_dir())
}

fn embed(kind: &FamilyKind, g: &Graph) -> Result<DiskEmbedding> {
    match kind {
        FamilyKind::TessellationBall { .. } => Ok(embed_tessellation(g)?),
        _ => Ok(embed_tree(g, 1.0)?),
    }
}

fn boundary(cfg: &RunConfig) -> Result<()> {
    let spec = cfg.family_spec()?;
    let tri = cfg.trichotomy()?;
    let c = cfg.f64_key("qi-constant")?;
    if !(c >= 0.0) {
        return Err(CliError::Usage(format!("invalid value '{c}' for key 'qi-constant': expected a number >= 0")));
    }
    let mut hists = Vec::new();
    for n in spec.indices() {
        let g = spec.generate(n)?;
        let emb = embed(&spec.kind, &g)?;
        let mu = NodeMeasure::uniform(g.node_count());
        for &k in &tri.k_schedule {
            hists.push(visual_histogram(&g, &emb, &mu, k, n)?);
        }
    }
    let verdict = classify_limit_measure(&hists, &tri)?;
    let finest = hists.iter().filter(|h| h.n == spec.n_max).max_by_key(|h| h.k).unwrap();
    let core_upper_bounds = cfg
        .radii()?
        .into_iter()
        .map(|r| Ok(UpperBound { radius: r, bound: core_upper_bound(finest, r as f64, c)? }))
        .collect::<Result<Vec<_>>>()?;
    let file = VerdictFile { verdict, config: tri, qi_constant: c, core_upper_bounds };
    output::write_histograms(&hists, &file, &cfg.out_dir())
}

#[derive(Serialize)]
struct DeltaRow {
    n: Option<usize>,
    node_count: usize,
    diameter: u32,
    #[serde(flatten)]
    estimate: DeltaEstimate,
}

fn hyperbolicity(cfg: &RunConfig) -> Result<()> {
    let graphs: Vec<(Option<usize>, Graph)> = if let Some(path) = cfg.input() {
        vec![(None, crate::load_graph(&path)?)]
    } else {
        let spec = cfg.family_spec()?;
        spec.indices().map(|n| Ok((Some(n), spec.generate(n)?))).collect::<Result<_>>()?
    };
    let samples = cfg.u64_key("samples")?;
    let seed = cfg.u64_key("seed")?;
    let mut rows = Vec::new();
    for (n, g) in graphs {
        let dm = g.distance_matrix()?;
        let diameter = dm.iter().copied().max().unwrap_or(0);
        let mut push = |estimate| rows.push(DeltaRow { n, node_count: g.node_count(), diameter, estimate });
        match cfg.method() {
            DeltaChoice::FourPoint => push(four_point_delta(&g, samples, seed)?),
            DeltaChoice::SlimTriangle => push(slim_triangle_delta(&g, samples, seed)?),
            DeltaChoice::Both => {
                push(four_point_delta(&g, samples, seed)?);
                push(slim_triangle_delta(&g, samples, seed)?);
            }
        }
    }
    let mut s = String::from("n,N,diameter,method,twice_delta,delta,samples,exhaustive\n");
    for r in &rows {
        let method =
            serde_json::to_value(r.estimate.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{method},{},{},{},{}",
            r.n.map_or(String::new(), |n| n.to_string()),
            r.node_count,
            r.diameter,
            r.estimate.twice_delta,
            num(r.estimate.delta()),
            r.estimate.samples,
            r.estimate.exhaustive
        );
    }
    let dir = cfg.out_dir();
    output::write_file(&dir, "delta.csv", &s)?;
    output::write_json(&dir, "delta.json", &rows)
}
