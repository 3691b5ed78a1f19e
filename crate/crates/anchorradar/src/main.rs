use std::path::PathBuf;
use std::process::ExitCode;

use anchorradar::commands::{self, EvalArgs, Grids, PredictArgs, StatsArgs, Subset, Summary};
use anchorradar::config::{RatioArg, RunOptions};
use anchorradar::formats::fmt_f64;
use anyhow::Result;
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "anchorradar",
    version,
    about = "Group anchor identification on hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Anchor purity, degree heuristic, random baseline and proportion oracle.
    Stats {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        subset: Subset,
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long, default_value = "0.075,0.025,0.9")]
        ratios: RatioArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded train/validation/test split over unique hyperedges.
    Split {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "0.075,0.025,0.9")]
        ratios: RatioArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Feature matrix operations.
    Features {
        #[command(subcommand)]
        action: FeaturesAction,
    },
    /// Train both stages and evaluate on the test split.
    Train {
        #[command(flatten)]
        opts: RunOptions,
        /// Number of seeded runs.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Seed of the first run (defaults to --seed).
        #[arg(long)]
        seed_base: Option<u64>,
    },
    /// Predict from a train output directory.
    Predict {
        /// Directory written by `train`.
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long)]
        extra: Option<PathBuf>,
        /// Apply the Stage-1 model to an unlabeled dataset.
        #[arg(long)]
        inductive: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Accuracy, NDCG and MRR of a prediction file.
    Eval {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        rankings: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "test")]
        subset: Subset,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid search on validation accuracy, then refit and test.
    Tune {
        #[command(flatten)]
        opts: RunOptions,
        #[arg(long, value_delimiter = ',')]
        lr1_grid: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        lr2_grid: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        alpha_grid: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        w_grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[arg(long)]
        seed_base: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
enum FeaturesAction {
    /// Write the per-incidence feature matrix as TSV.
    Dump {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        extra: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn print_summary(s: &Summary) {
    for r in &s.runs {
        println!(
            "seed {}\tvalidation_accuracy {}\ttest_accuracy {}\tndcg {}\tmrr {}",
            r.seed,
            fmt_f64(r.validation_accuracy),
            fmt_f64(r.test.accuracy),
            fmt_f64(r.test.ndcg),
            fmt_f64(r.test.mrr)
        );
    }
    if s.runs.len() > 1 {
        for (name, (m, sd)) in [("accuracy", s.accuracy), ("ndcg", s.ndcg), ("mrr", s.mrr)] {
            println!("{name}\t{:.2}±{:.2}", 100.0 * m, 100.0 * sd);
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Stats {
            data,
            subset,
            split,
            ratios,
            seed,
            out,
        } => {
            let row = commands::run_stats(&StatsArgs {
                data: &data,
                subset,
                split: split.as_deref(),
                ratios: ratios.0,
                seed,
                out: out.as_deref(),
            })?;
            println!("{}", commands::STATS_HEADER);
            println!("{}", row.to_tsv());
        }
        Command::Split {
            data,
            ratios,
            seed,
            out,
        } => {
            let s = commands::run_split(&data, ratios.0, seed, &out)?;
            let count = |l| s.count_keys(l);
            use anchorradar_core::SplitLabel::*;
            println!(
                "train {}\tvalidation {}\ttest {}\texcluded {}",
                count(Train),
                count(Validation),
                count(Test),
                count(Excluded)
            );
        }
        Command::Features {
            action: FeaturesAction::Dump { data, extra, out },
        } => {
            let x = commands::run_features(&data, extra.as_deref(), &out)?;
            println!("{} rows x {} columns", x.n_rows(), x.n_cols());
        }
        Command::Train {
            opts,
            repeat,
            seed_base,
        } => {
            let cfg = opts.resolve()?;
            print!("{}", cfg.to_config_text());
            let summary = commands::run_train(&cfg, repeat, seed_base)?;
            print_summary(&summary);
        }
        Command::Predict {
            model,
            data,
            split,
            extra,
            inductive,
            out,
        } => {
            let p = commands::run_predict(&PredictArgs {
                model_dir: &model,
                data: data.as_deref(),
                split: split.as_deref(),
                extra: extra.as_deref(),
                inductive,
                out: &out,
            })?;
            println!("predicted {} hyperedges", p.targets.len());
        }
        Command::Eval {
            data,
            split,
            pred,
            rankings,
            subset,
            out,
        } => {
            let r = commands::run_eval(&EvalArgs {
                data: &data,
                split: split.as_deref(),
                predictions: &pred,
                rankings: rankings.as_deref(),
                subset,
                out: out.as_deref(),
            })?;
            println!("edges\t{}", r.edges);
            println!("accuracy\t{}", fmt_f64(r.accuracy));
            if let Some((n, m)) = r.ranked {
                println!("ndcg\t{}", fmt_f64(n));
                println!("mrr\t{}", fmt_f64(m));
            }
        }
        Command::Tune {
            opts,
            lr1_grid,
            lr2_grid,
            alpha_grid,
            w_grid,
            repeat,
            seed_base,
        } => {
            let cfg = opts.resolve()?;
            let d = Grids::default();
            let grids = Grids {
                lr1: lr1_grid.unwrap_or(d.lr1),
                lr2: lr2_grid.unwrap_or(d.lr2),
                alpha: alpha_grid.unwrap_or(d.alpha),
                w: w_grid.unwrap_or(d.w),
            };
            let (outcomes, summary) = commands::run_tune(&cfg, &grids, repeat, seed_base)?;
            for o in &outcomes {
                let b = o.rows[o.best];
                println!(
                    "seed {}\tbest lr1 {} lr2 {} alpha {} w {}\tvalidation_accuracy {}",
                    o.result.seed,
                    b.lr1,
                    b.lr2,
                    b.alpha,
                    b.w,
                    fmt_f64(b.validation_accuracy)
                );
            }
            print_summary(&summary);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
