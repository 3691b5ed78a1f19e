//! Subcommand implementations. Each returns its results and writes its
//! output files; `main` only parses arguments and prints.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anchorradar_core::baselines::{
    degree_heuristic, eligible_edges, random_baseline, DegreeHeuristic,
};
use anchorradar_core::features::{ExtraColumns, PairFeatureMatrix};
use anchorradar_core::metrics::{accuracy, mrr, ndcg, MetricsReport};
use anchorradar_core::pipeline::{
    inductive_predict, predict_from_scores, predict_from_strengths, prepare_features, run_stage1,
    run_stage2, PipelineConfig, Predictions,
};
use anchorradar_core::split::make_splits;
use anchorradar_core::stats::proportion_oracle_accuracy;
use anchorradar_core::{Hypergraph, SplitAssignment, SplitLabel, SplitRatios};
use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use crate::config::{RunConfig, RunOptions};
use crate::formats::{self, fmt_f64};
use crate::significance::{purity_significance, PuritySignificance};

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>,
) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w).with_context(|| format!("writing {}", path.display()))?;
    w.flush()
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<Hypergraph> {
    formats::load_dataset(path).with_context(|| format!("reading dataset {}", path.display()))
}

fn load_split(h: &Hypergraph, path: &Path) -> Result<SplitAssignment> {
    let f =
        fs::File::open(path).with_context(|| format!("opening split file {}", path.display()))?;
    formats::read_split(h, f).with_context(|| format!("reading split file {}", path.display()))
}

fn load_extra(h: &Hypergraph, path: Option<&Path>) -> Result<Option<ExtraColumns>> {
    path.map(|p| {
        let f = fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
        formats::read_extra(h, f).with_context(|| format!("reading extra features {}", p.display()))
    })
    .transpose()
}

/// The split from a file if given, otherwise a seeded one.
pub fn resolve_splits(
    h: &Hypergraph,
    split: Option<&Path>,
    ratios: SplitRatios,
    seed: u64,
) -> Result<SplitAssignment> {
    match split {
        Some(path) => load_split(h, path),
        None => Ok(make_splits(h, ratios, seed)?),
    }
}

/// Caps rayon at `ANCHORRADAR_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("ANCHORRADAR_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| anyhow!("ANCHORRADAR_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            bail!("ANCHORRADAR_THREADS must be a positive integer");
        }
        builder = builder.num_threads(n);
    }
    Ok(builder.build()?)
}

// ---------------------------------------------------------------- split

pub fn run_split(
    data: &Path,
    ratios: SplitRatios,
    seed: u64,
    out: &Path,
) -> Result<SplitAssignment> {
    let h = load_dataset(data)?;
    let s = make_splits(&h, ratios, seed)?;
    write_file(out, |w| formats::write_split(&h, &s, w))?;
    Ok(s)
}

// ------------------------------------------------------------- features

pub fn run_features(data: &Path, extra: Option<&Path>, out: &Path) -> Result<PairFeatureMatrix> {
    let h = load_dataset(data)?;
    let extra = load_extra(&h, extra)?;
    let x = prepare_features(&h, extra.as_ref(), false)?;
    write_file(out, |w| formats::write_features(&h, &x, w))?;
    Ok(x)
}

// ---------------------------------------------------------------- stats

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subset {
    /// Every hyperedge with at least two members.
    All,
    Train,
    Validation,
    Test,
}

impl Subset {
    pub fn name(self) -> &'static str {
        match self {
            Subset::All => "all",
            Subset::Train => "train",
            Subset::Validation => "validation",
            Subset::Test => "test",
        }
    }

    pub fn edges(self, h: &Hypergraph, s: Option<&SplitAssignment>) -> Result<Vec<usize>> {
        let label = match self {
            Subset::All => return Ok(eligible_edges(h)),
            Subset::Train => SplitLabel::Train,
            Subset::Validation => SplitLabel::Validation,
            Subset::Test => SplitLabel::Test,
        };
        let s = s.ok_or_else(|| anyhow!("subset {} needs a split", self.name()))?;
        Ok(s.edges_with(h, label))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub dataset: String,
    pub subset: Subset,
    pub edges: usize,
    pub purity: PuritySignificance,
    pub heuristic: DegreeHeuristic,
    pub random_baseline: f64,
    pub oracle_accuracy: f64,
}

pub const STATS_HEADER: &str = "dataset\tsubset\tedges\tpurity_nodes\tpurity_real_mean\tpurity_real_std_over_nodes\tpurity_random_mean\tpurity_random_std_over_nodes\tt\tdf\tp_value\theuristic_direction\theuristic_train_max\theuristic_train_min\theuristic_test_accuracy\trandom_test_accuracy\toracle_accuracy";

impl StatsRow {
    pub fn to_tsv(&self) -> String {
        let w = &self.purity.welch;
        [
            self.dataset.clone(),
            self.subset.name().to_string(),
            self.edges.to_string(),
            w.n_a.to_string(),
            fmt_f64(w.mean_a),
            fmt_f64(w.std_a),
            fmt_f64(w.mean_b),
            fmt_f64(w.std_b),
            fmt_f64(w.t),
            fmt_f64(w.df),
            fmt_f64(self.purity.p_value),
            self.heuristic.direction.as_str().to_string(),
            fmt_f64(self.heuristic.train_accuracy_max),
            fmt_f64(self.heuristic.train_accuracy_min),
            fmt_f64(self.heuristic.test_accuracy),
            fmt_f64(self.random_baseline),
            fmt_f64(self.oracle_accuracy),
        ]
        .join("\t")
    }
}

/// Observation statistics of one dataset and split. Purity and the
/// proportion oracle use the `subset` hyperedges; the degree heuristic and
/// the random baseline are scored on the test hyperedges.
pub fn compute_stats(
    dataset: &str,
    h: &Hypergraph,
    s: &SplitAssignment,
    subset: Subset,
    seed: u64,
) -> Result<StatsRow> {
    let edges = subset.edges(h, Some(s))?;
    let purity = purity_significance(h, &edges, seed).context("purity significance")?;
    let heuristic = degree_heuristic(h, s)?;
    let test = s.edges_with(h, SplitLabel::Test);
    Ok(StatsRow {
        dataset: dataset.to_string(),
        subset,
        edges: edges.len(),
        purity,
        heuristic,
        random_baseline: random_baseline(h, &test),
        oracle_accuracy: proportion_oracle_accuracy(h, &edges),
    })
}

pub struct StatsArgs<'a> {
    pub data: &'a Path,
    pub subset: Subset,
    pub split: Option<&'a Path>,
    pub ratios: SplitRatios,
    pub seed: u64,
    pub out: Option<&'a Path>,
}

pub fn run_stats(args: &StatsArgs<'_>) -> Result<StatsRow> {
    let h = load_dataset(args.data)?;
    let s = resolve_splits(&h, args.split, args.ratios, args.seed)?;
    let name = args
        .data
        .file_stem()
        .map_or_else(|| "dataset".into(), |n| n.to_string_lossy().into_owned());
    let row = compute_stats(&name, &h, &s, args.subset, args.seed)?;
    if let Some(out) = args.out {
        write_file(out, |w| {
            writeln!(w, "{STATS_HEADER}")?;
            writeln!(w, "{}", row.to_tsv())
        })?;
    }
    Ok(row)
}

// ---------------------------------------------------------------- train

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub seed: u64,
    pub dir: PathBuf,
    pub validation_accuracy: f64,
    pub test: MetricsReport,
}

/// Mean and population std of each metric over repeated runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub runs: Vec<RunResult>,
    pub accuracy: (f64, f64),
    pub ndcg: (f64, f64),
    pub mrr: (f64, f64),
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len().max(1) as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl Summary {
    fn new(runs: Vec<RunResult>) -> Self {
        let pick = |f: fn(&MetricsReport) -> f64| {
            mean_std(&runs.iter().map(|r| f(&r.test)).collect::<Vec<_>>())
        };
        Summary {
            accuracy: pick(|m| m.accuracy),
            ndcg: pick(|m| m.ndcg),
            mrr: pick(|m| m.mrr),
            runs,
        }
    }

    fn write(&self, path: &Path) -> Result<()> {
        write_file(path, |w| {
            writeln!(w, "metric\tmean\tstd\truns")?;
            for (name, (m, s)) in [
                ("accuracy", self.accuracy),
                ("ndcg", self.ndcg),
                ("mrr", self.mrr),
            ] {
                writeln!(
                    w,
                    "{name}\t{}\t{}\t{}",
                    fmt_f64(m),
                    fmt_f64(s),
                    self.runs.len()
                )?;
            }
            Ok(())
        })
    }
}

/// Dataset, features and extra columns shared by every run on one file.
pub struct Prepared {
    pub h: Hypergraph,
    pub x: PairFeatureMatrix,
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared> {
    let h = load_dataset(&cfg.data)?;
    let extra = load_extra(&h, cfg.extra.as_deref())?;
    let x = prepare_features(&h, extra.as_ref(), cfg.pipeline.ablations.no_lf)
        .context("phase features")?;
    Ok(Prepared { h, x })
}

/// Scores, strengths and predictions of one configuration.
pub struct Fitted {
    pub model: Option<anchorradar_core::stage1::Stage1Model>,
    pub strengths: Option<Vec<f64>>,
    pub predictions: Predictions,
}

pub fn fit(
    h: &Hypergraph,
    x: &PairFeatureMatrix,
    s: &SplitAssignment,
    p: &PipelineConfig,
) -> Result<Fitted> {
    p.validate()?;
    h.require_anchor_count(p.k).context("phase load")?;
    let stage1 = if p.ablations.stage2_only {
        None
    } else {
        Some(run_stage1(h, x, s, p).context("phase stage1")?)
    };
    if p.ablations.stage1_only {
        let out = stage1.expect("stage 1 ran");
        let predictions = predict_from_scores(h, &out.scores, s, p.k).context("phase predict")?;
        return Ok(Fitted {
            model: Some(out.model),
            strengths: None,
            predictions,
        });
    }
    let zeros = vec![0.0; h.incidence_count()];
    let s1 = stage1
        .as_ref()
        .map_or(zeros.as_slice(), |o| o.scores.as_slice());
    let table = run_stage2(h, s1, s, p).context("phase stage2")?;
    let predictions =
        predict_from_strengths(h, &table.strengths, s, p).context("phase aggregate/predict")?;
    Ok(Fitted {
        model: stage1.map(|o| o.model),
        strengths: Some(table.strengths),
        predictions,
    })
}

fn write_fitted(h: &Hypergraph, f: &Fitted, dir: &Path) -> Result<()> {
    if let Some(m) = &f.model {
        write_file(&dir.join("model.txt"), |w| formats::write_model(m, w))?;
    }
    if let Some(s2) = &f.strengths {
        let p = &f
            .predictions
            .aggregated
            .as_ref()
            .expect("aggregated with strengths")
            .proportions;
        write_file(&dir.join("strengths.tsv"), |w| {
            formats::write_strengths(h, s2, p, w)
        })?;
    }
    write_file(&dir.join("predictions.tsv"), |w| {
        formats::write_edge_map(h, &f.predictions.predictions, w)
    })?;
    write_file(&dir.join("rankings.tsv"), |w| {
        formats::write_edge_map(h, &f.predictions.rankings, w)
    })?;
    Ok(())
}

/// One seeded train run writing into `dir`.
pub fn train_once(cfg: &RunConfig, prepared: &Prepared, dir: &Path) -> Result<RunResult> {
    let metrics_path = dir.join("metrics.tsv");
    if metrics_path.exists() {
        fs::remove_file(&metrics_path)?;
    }
    let h = &prepared.h;
    let s = resolve_splits(h, cfg.split.as_deref(), cfg.ratios, cfg.seed).context("phase split")?;
    write_file(&dir.join("config.txt"), |w| {
        w.write_all(cfg.to_config_text().as_bytes())
    })?;
    write_file(&dir.join("split.tsv"), |w| formats::write_split(h, &s, w))?;
    let fitted = fit(h, &prepared.x, &s, &cfg.pipeline)?;
    write_fitted(h, &fitted, dir)?;
    let test = fitted
        .predictions
        .evaluate(h, &s, SplitLabel::Test)
        .context("phase eval")?;
    let validation_accuracy = fitted
        .predictions
        .accuracy(h, &s, SplitLabel::Validation)
        .context("phase eval")?;
    write_file(&metrics_path, |w| {
        formats::write_metrics("test", cfg.seed, &test, w)
    })?;
    Ok(RunResult {
        seed: cfg.seed,
        dir: dir.to_path_buf(),
        validation_accuracy,
        test,
    })
}

/// `repeat` runs with seeds `seed_base, seed_base+1, …`. A single run writes
/// straight into the output directory, several into `run_<seed>/`
/// subdirectories plus `summary.tsv`.
pub fn run_train(cfg: &RunConfig, repeat: usize, seed_base: Option<u64>) -> Result<Summary> {
    if repeat == 0 {
        bail!("--repeat must be at least 1");
    }
    let prepared = prepare(cfg)?;
    let base = seed_base.unwrap_or(cfg.seed);
    let mut runs = Vec::with_capacity(repeat);
    for i in 0..repeat as u64 {
        let run_cfg = cfg.with_seed(base + i);
        let dir = if repeat == 1 {
            cfg.out.clone()
        } else {
            cfg.out.join(format!("run_{}", base + i))
        };
        runs.push(train_once(&run_cfg, &prepared, &dir)?);
    }
    let summary = Summary::new(runs);
    if repeat > 1 {
        summary.write(&cfg.out.join("summary.tsv"))?;
    }
    Ok(summary)
}

// ----------------------------------------------------------------- tune

/// Hyperparameter grids searched by `tune`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grids {
    pub lr1: Vec<f64>,
    pub lr2: Vec<f64>,
    pub alpha: Vec<f64>,
    pub w: Vec<f64>,
}

impl Default for Grids {
    fn default() -> Self {
        let mut alpha: Vec<f64> = (0..10).map(|i| f64::from(i) / 100.0).collect();
        alpha.extend((1..=10).map(|i| f64::from(i) / 10.0));
        Grids {
            lr1: vec![0.001, 0.01, 0.1],
            lr2: vec![0.001, 0.01, 0.1],
            alpha,
            w: (1..=10).map(f64::from).collect(),
        }
    }
}

impl Grids {
    /// Drops dimensions an ablation makes irrelevant (keeping the first
    /// value, which is what a tie would select anyway).
    fn effective(&self, p: &PipelineConfig) -> Grids {
        let first = |v: &Vec<f64>| v[..1].to_vec();
        let a = p.ablations;
        let mut g = self.clone();
        if a.stage1_only {
            g.lr2 = first(&g.lr2);
            g.alpha = first(&g.alpha);
            g.w = first(&g.w);
        }
        if a.stage2_only {
            g.lr1 = first(&g.lr1);
            g.alpha = first(&g.alpha);
        }
        if a.no_ga {
            g.w = first(&g.w);
        }
        g
    }

    fn validate(&self) -> Result<()> {
        if self.lr1.is_empty() || self.lr2.is_empty() || self.alpha.is_empty() || self.w.is_empty()
        {
            bail!("every tuning grid needs at least one value");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuneRow {
    pub index: usize,
    pub lr1: f64,
    pub lr2: f64,
    pub alpha: f64,
    pub w: f64,
    pub validation_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    pub rows: Vec<TuneRow>,
    pub best: usize,
    pub result: RunResult,
}

/// Exhaustive search on one split; the best row (first on ties) is then
/// refit and written like a train run.
pub fn tune_split(
    cfg: &RunConfig,
    prepared: &Prepared,
    grids: &Grids,
    dir: &Path,
) -> Result<TuneOutcome> {
    grids.validate()?;
    let h = &prepared.h;
    let x = &prepared.x;
    let base = cfg.pipeline;
    let g = grids.effective(&base);
    let s = resolve_splits(h, cfg.split.as_deref(), cfg.ratios, cfg.seed).context("phase split")?;
    h.require_anchor_count(base.k)?;

    let zeros = vec![0.0; h.incidence_count()];
    let stage1: Vec<Option<Vec<f64>>> = g
        .lr1
        .par_iter()
        .map(|&lr1| {
            if base.ablations.stage2_only {
                return Ok(None);
            }
            let p = PipelineConfig { lr1, ..base };
            Ok(Some(
                run_stage1(h, x, &s, &p).context("phase stage1")?.scores,
            ))
        })
        .collect::<Result<_>>()?;

    let (lr2s, alphas) = (&g.lr2, &g.alpha);
    let combos: Vec<(usize, f64, f64)> = (0..g.lr1.len())
        .flat_map(|i| {
            lr2s.iter()
                .flat_map(move |&lr2| alphas.iter().map(move |&a| (i, lr2, a)))
        })
        .collect();
    let blocks: Vec<Vec<TuneRow>> = combos
        .par_iter()
        .enumerate()
        .map(|(c, &(i, lr2, alpha))| {
            let p = PipelineConfig {
                lr1: g.lr1[i],
                lr2,
                alpha,
                ..base
            };
            let s1 = stage1[i].as_deref().unwrap_or(&zeros);
            let rows = if p.ablations.stage1_only {
                let pred = predict_from_scores(h, s1, &s, p.k)?;
                vec![(p.weight, pred.accuracy(h, &s, SplitLabel::Validation)?)]
            } else {
                let table = run_stage2(h, s1, &s, &p).context("phase stage2")?;
                g.w.iter()
                    .map(|&w| {
                        let pw = PipelineConfig { weight: w, ..p };
                        let pred = predict_from_strengths(h, &table.strengths, &s, &pw)?;
                        Ok((w, pred.accuracy(h, &s, SplitLabel::Validation)?))
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            Ok(rows
                .into_iter()
                .enumerate()
                .map(|(j, (w, acc))| TuneRow {
                    index: c * g.w.len() + j,
                    lr1: p.lr1,
                    lr2,
                    alpha,
                    w,
                    validation_accuracy: acc,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let rows: Vec<TuneRow> = blocks.into_iter().flatten().collect();

    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.validation_accuracy > rows[best].validation_accuracy {
            best = i;
        }
    }
    let b = rows[best];
    let mut best_cfg = cfg.clone();
    best_cfg.pipeline.lr1 = b.lr1;
    best_cfg.pipeline.lr2 = b.lr2;
    best_cfg.pipeline.alpha = b.alpha;
    best_cfg.pipeline.weight = b.w;
    let result = train_once(&best_cfg, prepared, dir)?;
    write_file(&dir.join("tune.tsv"), |w| {
        writeln!(w, "index\tlr1\tlr2\talpha\tw\tvalidation_accuracy")?;
        for r in &rows {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.index,
                r.lr1,
                r.lr2,
                r.alpha,
                r.w,
                fmt_f64(r.validation_accuracy)
            )?;
        }
        Ok(())
    })?;
    Ok(TuneOutcome { rows, best, result })
}

/// Tuning on `repeat` seeded splits; each split is tuned independently.
pub fn run_tune(
    cfg: &RunConfig,
    grids: &Grids,
    repeat: usize,
    seed_base: Option<u64>,
) -> Result<(Vec<TuneOutcome>, Summary)> {
    if repeat == 0 {
        bail!("--repeat must be at least 1");
    }
    let pool = thread_pool()?;
    let prepared = prepare(cfg)?;
    let base = seed_base.unwrap_or(cfg.seed);
    let mut outcomes = Vec::with_capacity(repeat);
    for i in 0..repeat as u64 {
        let run_cfg = cfg.with_seed(base + i);
        let dir = if repeat == 1 {
            cfg.out.clone()
        } else {
            cfg.out.join(format!("run_{}", base + i))
        };
        outcomes.push(pool.install(|| tune_split(&run_cfg, &prepared, grids, &dir))?);
    }
    let summary = Summary::new(outcomes.iter().map(|o| o.result.clone()).collect());
    if repeat > 1 {
        summary.write(&cfg.out.join("summary.tsv"))?;
    }
    Ok((outcomes, summary))
}

// -------------------------------------------------------------- predict

pub struct PredictArgs<'a> {
    pub model_dir: &'a Path,
    pub data: Option<&'a Path>,
    pub split: Option<&'a Path>,
    pub extra: Option<&'a Path>,
    pub inductive: bool,
    pub out: &'a Path,
}

/// Re-predicts from a train run directory, or applies its Stage-1 model to
/// another dataset with `inductive`.
pub fn run_predict(args: &PredictArgs<'_>) -> Result<Predictions> {
    let cfg_path = args.model_dir.join("config.txt");
    let cfg = RunOptions {
        config: Some(cfg_path),
        data: args.data.map(Path::to_path_buf),
        extra: args.extra.map(Path::to_path_buf),
        ..RunOptions::default()
    }
    .resolve()?;
    let h = load_dataset(&cfg.data)?;
    let p = &cfg.pipeline;
    let needs_model = args.inductive || p.ablations.stage1_only;
    let model = if needs_model {
        let path = args.model_dir.join("model.txt");
        let f = fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
        Some(formats::read_model(f).with_context(|| format!("reading {}", path.display()))?)
    } else {
        None
    };
    let features = |h: &Hypergraph| -> Result<PairFeatureMatrix> {
        let extra = load_extra(h, cfg.extra.as_deref())?;
        Ok(prepare_features(h, extra.as_ref(), p.ablations.no_lf)?)
    };
    let predictions = if args.inductive {
        let x = features(&h)?;
        inductive_predict(model.as_ref().expect("model loaded"), &h, &x, p.k, p.seed)?
    } else {
        let split = args
            .split
            .map(Path::to_path_buf)
            .unwrap_or_else(|| args.model_dir.join("split.tsv"));
        let s = load_split(&h, &split)?;
        if p.ablations.stage1_only {
            let x = features(&h)?;
            let s1 = model.as_ref().expect("model loaded").forward(&x)?;
            predict_from_scores(&h, &s1, &s, p.k)?
        } else {
            let path = args.model_dir.join("strengths.tsv");
            let f = fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
            let (s2, _) = formats::read_strengths(&h, f)?;
            predict_from_strengths(&h, &s2, &s, p)?
        }
    };
    write_file(&args.out.join("predictions.tsv"), |w| {
        formats::write_edge_map(&h, &predictions.predictions, w)
    })?;
    write_file(&args.out.join("rankings.tsv"), |w| {
        formats::write_edge_map(&h, &predictions.rankings, w)
    })?;
    Ok(predictions)
}

// ----------------------------------------------------------------- eval

pub struct EvalArgs<'a> {
    pub data: &'a Path,
    pub split: Option<&'a Path>,
    pub predictions: &'a Path,
    pub rankings: Option<&'a Path>,
    pub subset: Subset,
    pub out: Option<&'a Path>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub edges: usize,
    pub accuracy: f64,
    /// NDCG and MRR, when a rankings file is available.
    pub ranked: Option<(f64, f64)>,
}

/// Scores a prediction file. Rankings default to `rankings.tsv` next to
/// the prediction file; without them only accuracy is reported.
pub fn run_eval(args: &EvalArgs<'_>) -> Result<EvalResult> {
    let h = load_dataset(args.data)?;
    let s = args.split.map(|p| load_split(&h, p)).transpose()?;
    let targets = args.subset.edges(&h, s.as_ref())?;
    let read_map = |p: &Path| -> Result<_> {
        let f = fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
        formats::read_edge_map(&h, f).with_context(|| format!("reading {}", p.display()))
    };
    let predictions = read_map(args.predictions)?;
    let acc = accuracy(&h, &targets, &predictions)?;
    let ranking_path = args
        .rankings
        .map(Path::to_path_buf)
        .or_else(|| args.predictions.parent().map(|d| d.join("rankings.tsv")))
        .filter(|p| args.rankings.is_some() || p.exists());
    let ranked = match ranking_path {
        Some(p) => {
            let r = read_map(&p)?;
            Some((ndcg(&h, &targets, &r)?, mrr(&h, &targets, &r)?))
        }
        None => None,
    };
    let result = EvalResult {
        edges: targets.len(),
        accuracy: acc,
        ranked,
    };
    if let Some(out) = args.out {
        write_file(out, |w| {
            writeln!(w, "subset\t{}", args.subset.name())?;
            writeln!(w, "edges\t{}", result.edges)?;
            writeln!(w, "accuracy\t{}", fmt_f64(result.accuracy))?;
            match result.ranked {
                Some((n, m)) => {
                    writeln!(w, "ndcg\t{}", fmt_f64(n))?;
                    writeln!(w, "mrr\t{}", fmt_f64(m))
                }
                None => {
                    writeln!(w, "ndcg\tNA")?;
                    writeln!(w, "mrr\tNA")
                }
            }
        })?;
    }
    Ok(result)
}
