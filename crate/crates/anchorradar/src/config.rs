//! Run configuration: command-line options, flat `key = value` config
//! files, and their resolution (flag, then file, then default).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anchorradar_core::pipeline::{Ablations, PipelineConfig};
use anchorradar_core::SplitRatios;
use anyhow::{anyhow, bail, Context, Result};
use clap::Args;

const KNOWN_KEYS: &[&str] = &[
    "data", "split", "ratios", "seed", "lr1", "lr2", "alpha", "w", "epochs1", "epochs2", "hidden",
    "k", "ablation", "extra", "out",
];

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected `key = value`", i + 1))?;
        let key = k.trim();
        if !KNOWN_KEYS.contains(&key) {
            bail!("config line {}: unknown key {key:?}", i + 1);
        }
        out.insert(key.to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    parse_config_text(&text).with_context(|| format!("in config file {}", path.display()))
}

/// Three comma-separated split fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioArg(pub SplitRatios);

impl FromStr for RatioArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("bad ratio list {s:?}: {e}"))?;
        if parts.len() != 3 {
            return Err(format!("expected three ratios, got {s:?}"));
        }
        SplitRatios::new(parts[0], parts[1], parts[2])
            .map(RatioArg)
            .map_err(|e| e.to_string())
    }
}

impl fmt::Display for RatioArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0.train, self.0.validation, self.0.test)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Ablation {
    Stage1Only,
    Stage2Only,
    NoGa,
    NoLf,
}

impl Ablation {
    fn name(self) -> &'static str {
        match self {
            Ablation::Stage1Only => "stage1-only",
            Ablation::Stage2Only => "stage2-only",
            Ablation::NoGa => "no-ga",
            Ablation::NoLf => "no-lf",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "stage1-only" => Ok(Ablation::Stage1Only),
            "stage2-only" => Ok(Ablation::Stage2Only),
            "no-ga" => Ok(Ablation::NoGa),
            "no-lf" => Ok(Ablation::NoLf),
            other => bail!("unknown ablation {other:?}"),
        }
    }
}

fn ablation_set(list: &[Ablation]) -> Ablations {
    let mut a = Ablations::default();
    for item in list {
        match item {
            Ablation::Stage1Only => a.stage1_only = true,
            Ablation::Stage2Only => a.stage2_only = true,
            Ablation::NoGa => a.no_ga = true,
            Ablation::NoLf => a.no_lf = true,
        }
    }
    a
}

fn ablation_names(a: &Ablations) -> Vec<&'static str> {
    let mut out = Vec::new();
    for (on, item) in [
        (a.stage1_only, Ablation::Stage1Only),
        (a.stage2_only, Ablation::Stage2Only),
        (a.no_ga, Ablation::NoGa),
        (a.no_lf, Ablation::NoLf),
    ] {
        if on {
            out.push(item.name());
        }
    }
    out
}

/// Options shared by `train` and `tune`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunOptions {
    /// Dataset file (`members<TAB>anchors` per line).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Split file; overrides --ratios/--seed for the split.
    #[arg(long)]
    pub split: Option<PathBuf>,
    /// Train,validation,test fractions.
    #[arg(long)]
    pub ratios: Option<RatioArg>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lr1: Option<f64>,
    #[arg(long)]
    pub lr2: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Global aggregation weight.
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long)]
    pub epochs1: Option<usize>,
    #[arg(long)]
    pub epochs2: Option<usize>,
    /// Stage-1 hidden width.
    #[arg(long)]
    pub hidden: Option<usize>,
    /// Anchors per hyperedge.
    #[arg(long)]
    pub k: Option<usize>,
    /// Ablation switch; repeatable.
    #[arg(long, value_enum)]
    pub ablation: Vec<Ablation>,
    /// Per-node extra feature columns.
    #[arg(long)]
    pub extra: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` config file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: PathBuf,
    pub split: Option<PathBuf>,
    pub ratios: SplitRatios,
    pub seed: u64,
    pub pipeline: PipelineConfig,
    pub extra: Option<PathBuf>,
    pub out: PathBuf,
}

fn pick<T: FromStr>(cli: Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>>
where
    T::Err: fmt::Display,
{
    if cli.is_some() {
        return Ok(cli);
    }
    match file.get(key) {
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|e| anyhow!("config key {key}: {e}")),
        None => Ok(None),
    }
}

impl RunOptions {
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => load_config_file(path)?,
            None => BTreeMap::new(),
        };
        let defaults = PipelineConfig::default();
        let data: PathBuf = pick(self.data.clone(), &file, "data")?
            .ok_or_else(|| anyhow!("no dataset given (--data or `data =` in the config file)"))?;
        let ablations = if !self.ablation.is_empty() {
            ablation_set(&self.ablation)
        } else {
            match file.get("ablation") {
                Some(list) if !list.trim().is_empty() => ablation_set(
                    &list
                        .split(',')
                        .map(Ablation::parse)
                        .collect::<Result<Vec<_>>>()?,
                ),
                _ => Ablations::default(),
            }
        };
        let seed = pick(self.seed, &file, "seed")?.unwrap_or(0);
        let pipeline = PipelineConfig {
            lr1: pick(self.lr1, &file, "lr1")?.unwrap_or(defaults.lr1),
            lr2: pick(self.lr2, &file, "lr2")?.unwrap_or(defaults.lr2),
            alpha: pick(self.alpha, &file, "alpha")?.unwrap_or(defaults.alpha),
            weight: pick(self.w, &file, "w")?.unwrap_or(defaults.weight),
            epochs1: pick(self.epochs1, &file, "epochs1")?.unwrap_or(defaults.epochs1),
            epochs2: pick(self.epochs2, &file, "epochs2")?.unwrap_or(defaults.epochs2),
            hidden: pick(self.hidden, &file, "hidden")?.unwrap_or(defaults.hidden),
            k: pick(self.k, &file, "k")?.unwrap_or(defaults.k),
            seed,
            ablations,
        };
        pipeline.validate()?;
        Ok(RunConfig {
            data,
            split: pick(self.split.clone(), &file, "split")?,
            ratios: pick(self.ratios, &file, "ratios")?.map_or(SplitRatios::LABEL_SCARCE, |r| r.0),
            seed,
            pipeline,
            extra: pick(self.extra.clone(), &file, "extra")?,
            out: pick(self.out.clone(), &file, "out")?.unwrap_or_else(|| PathBuf::from("out")),
        })
    }
}

impl RunConfig {
    /// Same settings with another seed (split and model).
    pub fn with_seed(&self, seed: u64) -> RunConfig {
        let mut c = self.clone();
        c.seed = seed;
        c.pipeline.seed = seed;
        c
    }

    /// `key = value` text readable by [`parse_config_text`].
    pub fn to_config_text(&self) -> String {
        let p = &self.pipeline;
        let mut lines = vec![format!("data = {}", self.data.display())];
        if let Some(s) = &self.split {
            lines.push(format!("split = {}", s.display()));
        }
        lines.push(format!("ratios = {}", RatioArg(self.ratios)));
        lines.push(format!("seed = {}", self.seed));
        lines.push(format!("lr1 = {}", p.lr1));
        lines.push(format!("lr2 = {}", p.lr2));
        lines.push(format!("alpha = {}", p.alpha));
        lines.push(format!("w = {}", p.weight));
        lines.push(format!("epochs1 = {}", p.epochs1));
        lines.push(format!("epochs2 = {}", p.epochs2));
        lines.push(format!("hidden = {}", p.hidden));
        lines.push(format!("k = {}", p.k));
        lines.push(format!(
            "ablation = {}",
            ablation_names(&p.ablations).join(",")
        ));
        if let Some(x) = &self.extra {
            lines.push(format!("extra = {}", x.display()));
        }
        lines.push(format!("out = {}", self.out.display()));
        let mut text = lines.join("\n");
        text.push('\n');
        text
    }
}
