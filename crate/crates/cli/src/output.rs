//! Report files: CSV with a fixed number format, pretty JSON, and SVG
//! written as plain text.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use corescope::boundary::{TrichotomyVerdict, VisualHistogram};
use corescope::core_detector::CoreReport;
use serde::Serialize;

use crate::error::{CliError, Result};

/// Series colours, reused cyclically.
pub const COLOR_CYCLE: [&str; 8] =
    ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;

/// Fixed notation with `digits` significant digits: `0.6` → `0.600000000000`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { format!("{:.*}", digits - 1, 0.0) } else { format!("{x}") };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i64 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    let decimals = (digits as i64 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn num(x: f64) -> String {
    fmt_sig(x, 12)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(CliError::io(path))
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    write_file(dir, name, &text)
}

pub fn proportions_csv(report: &CoreReport) -> String {
    let mut s = String::from("n,N,center,radius,proportion\n");
    let mut rows: Vec<(usize, usize, usize, u32, f64)> = Vec::new();
    for cell in &report.cells {
        for p in &cell.series {
            rows.push((p.n, p.node_count, cell.center, cell.radius, p.proportion));
        }
    }
    rows.sort_by(|a, b| (a.0, a.2, a.3).cmp(&(b.0, b.2, b.3)));
    for (n, count, center, radius, p) in rows {
        let _ = writeln!(s, "{n},{count},{center},{radius},{}", num(p));
    }
    s
}

pub fn core_sets_csv(report: &CoreReport) -> Result<String> {
    let mut s = String::from("alpha,node,radius\n");
    for &alpha in &report.query.alphas {
        for m in corescope::core_detector::alpha_core_set(report, alpha)? {
            let _ = writeln!(s, "{},{},{}", num(alpha), m.node, m.radius);
        }
    }
    Ok(s)
}

/// `proportions.csv`, `report.json`, `proportions.svg` and `core_sets.csv`.
pub fn write_core_report(report: &CoreReport, dir: &Path) -> Result<()> {
    write_file(dir, "proportions.csv", &proportions_csv(report))?;
    write_json(dir, "report.json", report)?;
    write_file(dir, "proportions.svg", &proportions_svg(report))?;
    write_file(dir, "core_sets.csv", &core_sets_csv(report)?)
}

fn svg_open(s: &mut String) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="14">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
}

/// Line plot of proportion against n, one series per (center, radius).
pub fn proportions_svg(report: &CoreReport) -> String {
    let (left, right, top, bottom) = (80.0, 200.0, 40.0, 70.0);
    let (pw, ph) = (WIDTH - left - right, HEIGHT - top - bottom);
    let (n_lo, n_hi) = (report.family.n_min as f64, report.family.n_max as f64);
    let span = (n_hi - n_lo).max(1.0);
    let x = |n: f64| left + (n - n_lo) / span * pw;
    let y = |p: f64| top + (1.0 - p) * ph;

    let mut s = String::new();
    svg_open(&mut s);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{}" x2="{}" y2="{}"/>"#, top + ph, left + pw, top + ph);
    let _ = writeln!(s, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{}"/>"#, top + ph);
    let _ = writeln!(s, "</g>");
    for i in 0..=5 {
        let p = i as f64 / 5.0;
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{p:.1}</text>"#, left - 8.0, y(p) + 5.0);
    }
    let ticks = (report.family.n_max - report.family.n_min).min(10).max(1);
    let mut last = None;
    for i in 0..=ticks {
        let n = report.family.n_min + (report.family.n_max - report.family.n_min) * i / ticks;
        if last == Some(n) {
            continue;
        }
        last = Some(n);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{}" text-anchor="middle">{n}</text>"#, x(n as f64), top + ph + 22.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">n</text>"#, left + pw / 2.0, HEIGHT - 15.0);
    let _ = writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">proportion</text>"#,
        top + ph / 2.0,
        top + ph / 2.0
    );
    for (i, cell) in report.cells.iter().enumerate() {
        let color = COLOR_CYCLE[i % COLOR_CYCLE.len()];
        let points: Vec<String> =
            cell.series.iter().map(|p| format!("{:.2},{:.2}", x(p.n as f64), y(p.proportion))).collect();
        let _ =
            writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, points.join(" "));
        let ly = top + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">center {} r={}</text>"#,
            left + pw + 20.0,
            left + pw + 40.0,
            left + pw + 46.0,
            ly + 5.0,
            cell.center,
            cell.radius
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn histograms_csv(hists: &[VisualHistogram]) -> String {
    let mut s = String::from("n,K,arc_index,mass\n");
    let mut sorted: Vec<&VisualHistogram> = hists.iter().collect();
    sorted.sort_by_key(|h| (h.n, h.k));
    for h in sorted {
        for (i, m) in h.masses.iter().enumerate() {
            let _ = writeln!(s, "{},{},{i},{}", h.n, h.k, num(*m));
        }
    }
    s
}

/// Polar bars: arc `i` drawn as a wedge whose radius grows with its mass.
pub fn polar_svg(h: &VisualHistogram) -> String {
    let (cx, cy, r_max) = (WIDTH / 2.0, HEIGHT / 2.0 + 15.0, 250.0);
    let peak = h.max_mass().max(1e-300);
    let mut s = String::new();
    svg_open(&mut s);
    let _ = writeln!(
        s,
        r#"<text x="{cx}" y="25" text-anchor="middle">n = {}, K = {}, max arc mass {}</text>"#,
        h.n,
        h.k,
        num(peak)
    );
    let _ = writeln!(s, r##"<circle cx="{cx}" cy="{cy}" r="{r_max}" fill="none" stroke="#999999"/>"##);
    let tau = std::f64::consts::TAU;
    for (i, &m) in h.masses.iter().enumerate() {
        if m <= 0.0 {
            continue;
        }
        let r = r_max * (m / peak).sqrt();
        let (a0, a1) = (tau * i as f64 / h.k as f64, tau * (i + 1) as f64 / h.k as f64);
        // Screen y points down, so angles are negated.
        let (x0, y0) = (cx + r * a0.cos(), cy - r * a0.sin());
        let (x1, y1) = (cx + r * a1.cos(), cy - r * a1.sin());
        let large = if a1 - a0 > std::f64::consts::PI { 1 } else { 0 };
        let color = COLOR_CYCLE[i % COLOR_CYCLE.len()];
        let _ = writeln!(
            s,
            r#"<path d="M {cx:.2} {cy:.2} L {x0:.2} {y0:.2} A {r:.2} {r:.2} 0 {large} 0 {x1:.2} {y1:.2} Z" fill="{color}" fill-opacity="0.8"/>"#
        );
    }
    s.push_str("</svg>\n");
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct UpperBound {
    pub radius: u32,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct VerdictFile {
    #[serde(flatten)]
    pub verdict: TrichotomyVerdict,
    pub config: corescope::boundary::TrichotomyConfig,
    pub qi_constant: f64,
    /// Discrete `∫ μ(E_u^{r+C}) dμ(u)` at the largest n and finest K.
    pub core_upper_bounds: Vec<UpperBound>,
}

/// `histograms.csv`, `verdict.json` and one `histogram_n{n}.svg` per n
/// (finest K).
pub fn write_histograms(hists: &[VisualHistogram], verdict: &VerdictFile, dir: &Path) -> Result<()> {
    write_file(dir, "histograms.csv", &histograms_csv(hists))?;
    write_json(dir, "verdict.json", verdict)?;
    let mut ns: Vec<usize> = hists.iter().map(|h| h.n).collect();
    ns.sort_unstable();
    ns.dedup();
    for n in ns {
        let finest = hists.iter().filter(|h| h.n == n).max_by_key(|h| h.k).unwrap();
        write_file(dir, &format!("histogram_n{n}.svg"), &polar_svg(finest))?;
    }
    Ok(())
}
