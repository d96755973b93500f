//! Flat `key=value` configuration shared by the config file and the
//! command-line flags. Flags override file values; every run echoes its
//! fully resolved configuration so it can be replayed with `--config`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use corescope::boundary::TrichotomyConfig;
use corescope::core_detector::{Centers, DEFAULT_TAIL_WINDOW};
use corescope::generators::{BranchingSequence, FamilyKind, FamilySpec, DEFAULT_NODE_CAP};
use corescope::{Mode, DEFAULT_SEED};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    Generate,
    Traffic,
    CoreScan,
    Boundary,
    Hyperbolicity,
}

impl Command {
    pub const ALL: [Command; 5] = [Self::Generate, Self::Traffic, Self::CoreScan, Self::Boundary, Self::Hyperbolicity];

    pub fn name(self) -> &'static str {
        match self {
            Self::Generate => "generate",
            Self::Traffic => "traffic",
            Self::CoreScan => "core-scan",
            Self::Boundary => "boundary",
            Self::Hyperbolicity => "hyperbolicity",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Self::Generate => "Write one family member as an edge list",
            Self::Traffic => "Node and ball loads of a single graph",
            Self::CoreScan => "Ball proportions across a family and alpha-core verdicts",
            Self::Boundary => "Visual boundary histograms and the limit-measure classification",
            Self::Hyperbolicity => "Gromov delta estimates",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Self::Generate => &["family", "k", "ks", "p", "q", "files", "node-cap", "out", "n"],
            Self::Traffic => {
                &["family", "k", "ks", "p", "q", "files", "node-cap", "out", "n", "input", "center", "radii", "mode"]
            }
            Self::CoreScan => &[
                "family", "k", "ks", "p", "q", "files", "node-cap", "out", "n-min", "n-max", "center", "radii",
                "alphas", "tail", "mode",
            ],
            Self::Boundary => &[
                "family",
                "k",
                "ks",
                "p",
                "q",
                "files",
                "node-cap",
                "out",
                "n-min",
                "n-max",
                "arcs",
                "atom-threshold",
                "epsilon",
                "window",
                "qi-constant",
                "radii",
            ],
            Self::Hyperbolicity => &[
                "family", "k", "ks", "p", "q", "files", "node-cap", "out", "n-min", "n-max", "input", "method",
                "samples", "seed",
            ],
        }
    }
}

/// Every recognised key with a one-line help text.
pub const KEYS: &[(&str, &str)] = &[
    ("family", "tree | ray | lattice | tessellation | cycle | path | files"),
    ("k", "constant branching number of a tree family (>= 2)"),
    ("ks", "explicit branching sequence k_1,k_2,... of a tree family"),
    ("p", "lattice dimension, or polygon size of a {p,q} tessellation"),
    ("q", "vertex degree of a {p,q} tessellation"),
    ("files", "comma-separated edge-list files, one per family index"),
    ("n", "family index of the single graph to use"),
    ("n-min", "first family index (default 1, 3 for cycles, 0 for files)"),
    ("n-max", "last family index"),
    ("input", "edge-list file to analyse instead of a family member"),
    ("center", "root | all | comma-separated node ids"),
    ("radii", "comma-separated ball radii, strictly ascending"),
    ("alphas", "comma-separated alpha levels in (0,1)"),
    ("tail", "number of trailing terms in the liminf estimate"),
    ("mode", "fast | oracle"),
    ("seed", "PRNG seed for sampling"),
    ("samples", "number of sampled quadruples or triangles"),
    ("method", "four-point | slim-triangle | both"),
    ("arcs", "comma-separated arc counts K, strictly ascending"),
    ("atom-threshold", "arc mass that counts as an atom"),
    ("epsilon", "tolerance of the limit-measure classification"),
    ("window", "number of largest indices that must agree"),
    ("qi-constant", "quasi-isometry constant C added to ball radii"),
    ("node-cap", "refuse to build graphs larger than this"),
    ("out", "output directory"),
];

fn is_key(k: &str) -> bool {
    KEYS.iter().any(|(name, _)| *name == k)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Reads `key=value` lines; `#` starts a comment line.
pub fn parse_config_text(text: &str, source: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(usage(format!("{source}:{}: expected key=value, got '{line}'", i + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k != "command" && !is_key(k) {
            return Err(usage(format!("{source}:{}: unknown key '{k}'", i + 1)));
        }
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeltaChoice {
    FourPoint,
    SlimTriangle,
    Both,
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    values: BTreeMap<&'static str, String>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str, what: &str) -> Result<T> {
    v.parse().map_err(|_| usage(format!("invalid value '{v}' for key '{key}': expected {what}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str, what: &str) -> Result<Vec<T>> {
    if v.is_empty() {
        return Err(usage(format!("empty list for key '{key}'")));
    }
    v.split(',').map(|x| parse_num(key, x.trim(), what)).collect()
}

impl RunConfig {
    /// Merges file values under flag values, checks types and applies
    /// defaults.
    pub fn resolve(command: Command, file: BTreeMap<String, String>, flags: BTreeMap<String, String>) -> Result<Self> {
        let mut merged = file;
        if let Some(c) = merged.remove("command") {
            if c != command.name() {
                return Err(usage(format!("config file is for command '{c}', not '{}'", command.name())));
            }
        }
        merged.extend(flags);
        let mut values: BTreeMap<&'static str, String> = BTreeMap::new();
        for (k, v) in merged {
            let Some(&key) = command.keys().iter().find(|&&name| name == k) else {
                return Err(usage(if is_key(&k) {
                    format!("key '{k}' does not apply to {}", command.name())
                } else {
                    format!("unknown key '{k}'")
                }));
            };
            values.insert(key, v);
        }
        let mut cfg = Self { command, values };
        cfg.apply_defaults()?;
        cfg.check()?;
        Ok(cfg)
    }

    fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| usage(format!("missing required key '{key}'")))
    }

    fn set_default(&mut self, key: &'static str, value: impl Into<String>) {
        if self.command.keys().contains(&key) {
            self.values.entry(key).or_insert_with(|| value.into());
        }
    }

    fn apply_defaults(&mut self) -> Result<()> {
        let single_graph = matches!(self.command, Command::Traffic | Command::Hyperbolicity) && self.has("input");
        if !single_graph {
            let family = self.require("family")?.to_string();
            match family.as_str() {
                "cycle" => self.set_default("n-min", "3"),
                "files" => {
                    let count = self.require("files")?.split(',').count();
                    self.set_default("n-min", "0");
                    self.set_default("n", "0");
                    if let Some(n_min) = self.get("n-min") {
                        let n_min: usize = parse_num("n-min", n_min, "a non-negative integer")?;
                        self.set_default("n-max", format!("{}", n_min + count - 1));
                    }
                }
                _ => {}
            }
            self.set_default("n-min", "1");
            self.set_default("node-cap", format!("{DEFAULT_NODE_CAP}"));
        } else if self.has("family") {
            return Err(usage("keys 'input' and 'family' are mutually exclusive"));
        }
        self.set_default("out", "out");
        self.set_default("center", "root");
        self.set_default("mode", "fast");
        self.set_default("tail", format!("{DEFAULT_TAIL_WINDOW}"));
        self.set_default("seed", format!("{DEFAULT_SEED}"));
        self.set_default("samples", "100000");
        self.set_default("method", "four-point");
        let tri = TrichotomyConfig::default();
        let arcs: Vec<String> = tri.k_schedule.iter().map(|k| k.to_string()).collect();
        self.set_default("arcs", arcs.join(","));
        self.set_default("atom-threshold", format!("{}", tri.atom_threshold));
        self.set_default("epsilon", format!("{}", tri.epsilon));
        self.set_default("window", format!("{}", tri.window));
        match self.command {
            Command::Boundary => {
                let c = if self.get("family") == Some("tessellation") { "1" } else { "0" };
                self.set_default("qi-constant", c);
                self.set_default("radii", "0,1,2");
            }
            _ => self.set_default("radii", "0"),
        }
        Ok(())
    }

    /// Type-checks every present key and validates the family.
    fn check(&self) -> Result<()> {
        for (&k, v) in &self.values {
            match k {
                "k" | "seed" | "samples" => {
                    parse_num::<u64>(k, v, "a non-negative integer")?;
                }
                "p" | "q" | "n" | "n-min" | "n-max" | "tail" | "window" | "node-cap" => {
                    parse_num::<usize>(k, v, "a non-negative integer")?;
                }
                "ks" => {
                    parse_list::<u64>(k, v, "a list of positive integers")?;
                }
                "radii" => {
                    parse_list::<u32>(k, v, "a list of non-negative integers")?;
                }
                "arcs" => {
                    parse_list::<usize>(k, v, "a list of arc counts")?;
                }
                "alphas" => {
                    parse_list::<f64>(k, v, "a list of numbers")?;
                }
                "atom-threshold" | "epsilon" | "qi-constant" => {
                    parse_num::<f64>(k, v, "a number")?;
                }
                "mode" if v != "fast" && v != "oracle" => {
                    return Err(usage(format!("invalid value '{v}' for key 'mode': expected fast or oracle")))
                }
                "method" if !matches!(v.as_str(), "four-point" | "slim-triangle" | "both") => {
                    return Err(usage(format!(
                        "invalid value '{v}' for key 'method': expected four-point, slim-triangle or both"
                    )))
                }
                "center" => {
                    self.centers()?;
                }
                _ => {}
            }
        }
        if self.node_cap()? == 0 {
            return Err(usage("key 'node-cap' must be positive"));
        }
        if self.has("family") {
            let spec = self.family_spec_unloaded()?;
            spec.validate().map_err(|e| usage(format!("family {}: {e}", self.get("family").unwrap())))?;
        }
        if self.command == Command::CoreScan {
            self.require("alphas")?;
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.get("out").unwrap_or("out"))
    }

    pub fn input(&self) -> Option<PathBuf> {
        self.get("input").map(PathBuf::from)
    }

    pub fn node_cap(&self) -> Result<usize> {
        self.get("node-cap").map_or(Ok(DEFAULT_NODE_CAP), |v| parse_num("node-cap", v, "a non-negative integer"))
    }

    pub fn usize_key(&self, key: &str) -> Result<usize> {
        parse_num(key, self.require(key)?, "a non-negative integer")
    }

    pub fn u64_key(&self, key: &str) -> Result<u64> {
        parse_num(key, self.require(key)?, "a non-negative integer")
    }

    pub fn f64_key(&self, key: &str) -> Result<f64> {
        parse_num(key, self.require(key)?, "a number")
    }

    pub fn radii(&self) -> Result<Vec<u32>> {
        parse_list("radii", self.require("radii")?, "a list of non-negative integers")
    }

    pub fn alphas(&self) -> Result<Vec<f64>> {
        parse_list("alphas", self.require("alphas")?, "a list of numbers")
    }

    pub fn mode(&self) -> Mode {
        if self.get("mode") == Some("oracle") {
            Mode::Oracle
        } else {
            Mode::Fast
        }
    }

    pub fn method(&self) -> DeltaChoice {
        match self.get("method") {
            Some("slim-triangle") => DeltaChoice::SlimTriangle,
            Some("both") => DeltaChoice::Both,
            _ => DeltaChoice::FourPoint,
        }
    }

    pub fn centers(&self) -> Result<Centers> {
        match self.require("center")? {
            "root" => Ok(Centers::List(vec![0])),
            "all" => Ok(Centers::AllOfSmallest),
            list => Ok(Centers::List(parse_list("center", list, "root, all or a list of node ids")?)),
        }
    }

    pub fn trichotomy(&self) -> Result<TrichotomyConfig> {
        Ok(TrichotomyConfig {
            k_schedule: parse_list("arcs", self.require("arcs")?, "a list of arc counts")?,
            atom_threshold: self.f64_key("atom-threshold")?,
            epsilon: self.f64_key("epsilon")?,
            window: self.usize_key("window")?,
        })
    }

    pub fn family_name(&self) -> Option<&str> {
        self.get("family")
    }

    fn range(&self) -> Result<(usize, usize)> {
        if self.command.keys().contains(&"n") {
            let n = self.usize_key("n")?;
            return Ok((n, n));
        }
        Ok((self.usize_key("n-min")?, self.usize_key("n-max")?))
    }

    /// Family description without reading any edge-list files.
    fn family_spec_unloaded(&self) -> Result<FamilySpec> {
        self.build_family(|paths| Ok(vec![corescope::Graph::from_edges(1, &[]).unwrap(); paths.len()]))
    }

    /// The configured family, loading edge-list files if needed.
    pub fn family_spec(&self) -> Result<FamilySpec> {
        self.build_family(|paths| paths.iter().map(|p| crate::load_graph(Path::new(p))).collect())
    }

    fn build_family(&self, load: impl Fn(&[&str]) -> Result<Vec<corescope::Graph>>) -> Result<FamilySpec> {
        let name = self.require("family")?;
        let (n_min, n_max) = self.range()?;
        let kind = match name {
            "tree" => match (self.get("k"), self.get("ks")) {
                (Some(_), Some(_)) => return Err(usage("keys 'k' and 'ks' are mutually exclusive")),
                (Some(k), None) => BranchingSequence::constant(parse_num("k", k, "an integer >= 2")?)
                    .map_err(|e| usage(format!("key 'k': {e}")))?,
                (None, Some(ks)) => BranchingSequence::explicit(parse_list("ks", ks, "a list of positive integers")?)
                    .map_err(|e| usage(format!("key 'ks': {e}")))?,
                (None, None) => return Err(usage("missing required key 'k' (or 'ks')")),
            }
            .into_kind(),
            "ray" => BranchingSequence::explicit(vec![1; n_max.max(1)]).map_err(|e| usage(e.to_string()))?.into_kind(),
            "lattice" => FamilyKind::LatticeBox { p: self.usize_key("p")? },
            "tessellation" => FamilyKind::TessellationBall { p: self.usize_key("p")?, q: self.usize_key("q")? },
            "cycle" => FamilyKind::Cycle,
            "path" => FamilyKind::Path,
            "files" => {
                let paths: Vec<&str> = self.require("files")?.split(',').map(str::trim).collect();
                // Files are numbered from n-min, or from 0 when a single n is chosen.
                let first = if self.has("n-min") { self.usize_key("n-min")? } else { 0 };
                if n_min < first || n_max < n_min || n_max - first >= paths.len() {
                    return Err(usage(format!(
                        "family index range {n_min}..={n_max} is not covered by the {} listed files",
                        paths.len()
                    )));
                }
                let graphs = load(&paths[n_min - first..=n_max - first])?;
                FamilyKind::File(graphs)
            }
            other => {
                return Err(usage(format!(
                    "invalid value '{other}' for key 'family': expected tree, ray, lattice, tessellation, cycle, path or files"
                )))
            }
        };
        let spec = FamilySpec { kind, n_min, n_max, node_cap: self.node_cap()? };
        Ok(spec)
    }

    /// `key=value` lines, sorted by key, starting with the command.
    pub fn echo(&self) -> String {
        let mut s = format!("command={}\n", self.command.name());
        for (k, v) in &self.values {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }
}

trait IntoKind {
    fn into_kind(self) -> FamilyKind;
}

impl IntoKind for BranchingSequence {
    fn into_kind(self) -> FamilyKind {
        FamilyKind::BranchingTree(self)
    }
}
