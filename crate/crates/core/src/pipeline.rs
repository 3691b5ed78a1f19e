//! End-to-end two-stage run: features → Stage 1 → Stage 2 → aggregation →
//! prediction, with ablation switches and an inductive variant.
//!
//! The stages are exposed separately so that a grid search can reuse a
//! Stage-1 run across Stage-2 settings and a Stage-2 run across weights.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::features::{feature_matrix, ExtraColumns, PairFeatureMatrix};
use crate::hypergraph::Hypergraph;
use crate::metrics::{evaluate, EdgeMap, MetricsReport};
use crate::split::{SplitAssignment, SplitLabel};
use crate::stage1::{train_stage1, Stage1Config, Stage1Model, Stage1Output};
use crate::stage2::{
    aggregate_by_incidence, global_aggregate, predict, rank_members, train_stage2,
    AggregatedProportions, AnchorStrengthTable, RankBy, Stage2Config,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Ablations {
    /// Predict from Stage-1 scores; Stage 2 is skipped.
    pub stage1_only: bool,
    /// Train Stage 2 with `α = 0`; Stage 1 is skipped.
    pub stage2_only: bool,
    /// Rank by learned strengths instead of aggregated proportions.
    pub no_ga: bool,
    /// Zero the local feature columns before Stage 1.
    pub no_lf: bool,
}

impl Ablations {
    pub fn validate(&self) -> Result<()> {
        if self.stage1_only && (self.stage2_only || self.no_ga) {
            return Err(Error::InvalidConfig(
                "stage1-only cannot be combined with stage-2 ablations",
            ));
        }
        if self.stage2_only && self.no_lf {
            return Err(Error::InvalidConfig(
                "no-lf has no effect when Stage 1 is skipped",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub lr1: f64,
    pub lr2: f64,
    pub alpha: f64,
    pub weight: f64,
    pub epochs1: usize,
    pub epochs2: usize,
    pub hidden: usize,
    pub seed: u64,
    /// Anchors predicted per hyperedge.
    pub k: usize,
    pub ablations: Ablations,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lr1: 0.01,
            lr2: 0.01,
            alpha: 0.0,
            weight: 1.0,
            epochs1: crate::stage1::DEFAULT_EPOCHS,
            epochs2: crate::stage2::DEFAULT_EPOCHS,
            hidden: crate::stage1::DEFAULT_HIDDEN,
            seed: 0,
            k: 1,
            ablations: Ablations::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        self.ablations.validate()?;
        if !(self.lr1 > 0.0) || !(self.lr2 > 0.0) {
            return Err(Error::InvalidConfig("learning rates must be positive"));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::NegativeAlpha);
        }
        if !(self.weight >= 0.0) {
            return Err(Error::NegativeWeight);
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("anchors per edge must be at least 1"));
        }
        if self.hidden == 0 {
            return Err(Error::InvalidConfig("hidden width must be at least 1"));
        }
        Ok(())
    }

    /// `α` after the stage2-only ablation.
    pub fn effective_alpha(&self) -> f64 {
        if self.ablations.stage2_only {
            0.0
        } else {
            self.alpha
        }
    }

    pub fn stage1_config(&self) -> Stage1Config {
        Stage1Config {
            lr: self.lr1,
            epochs: self.epochs1,
            hidden: self.hidden,
            seed: self.seed,
        }
    }

    pub fn stage2_config(&self) -> Stage2Config {
        Stage2Config {
            lr: self.lr2,
            alpha: self.effective_alpha(),
            epochs: self.epochs2,
        }
    }
}

/// Feature matrix with the no-LF ablation applied.
pub fn prepare_features(
    h: &Hypergraph,
    extra: Option<&ExtraColumns>,
    no_lf: bool,
) -> Result<PairFeatureMatrix> {
    let mut x = feature_matrix(h, extra)?;
    if no_lf {
        x.zero_local_columns();
    }
    Ok(x)
}

/// Hyperedges that receive predictions: validation then test, in edge order.
pub fn target_edges(h: &Hypergraph, splits: &SplitAssignment) -> Vec<usize> {
    (0..h.edge_count())
        .filter(|&e| {
            matches!(
                splits.label_of_edge(h, e),
                SplitLabel::Validation | SplitLabel::Test
            )
        })
        .collect()
}

/// Predicted anchors and full member rankings of the target hyperedges.
#[derive(Debug, Clone, PartialEq)]
pub struct Predictions {
    pub aggregated: Option<AggregatedProportions>,
    pub targets: Vec<usize>,
    pub predictions: EdgeMap,
    pub rankings: EdgeMap,
}

impl Predictions {
    /// Metrics over the hyperedges carrying `label`.
    pub fn evaluate(
        &self,
        h: &Hypergraph,
        splits: &SplitAssignment,
        label: SplitLabel,
    ) -> Result<MetricsReport> {
        evaluate(
            h,
            &splits.edges_with(h, label),
            &self.predictions,
            &self.rankings,
        )
    }

    /// Accuracy on `label` hyperedges without computing NDCG/MRR.
    pub fn accuracy(
        &self,
        h: &Hypergraph,
        splits: &SplitAssignment,
        label: SplitLabel,
    ) -> Result<f64> {
        crate::metrics::accuracy(h, &splits.edges_with(h, label), &self.predictions)
    }
}

fn collect(
    h: &Hypergraph,
    targets: Vec<usize>,
    by: &RankBy<'_>,
    k: usize,
    aggregated: Option<AggregatedProportions>,
) -> Result<Predictions> {
    let top = predict(h, &targets, by, k)?;
    let predictions: EdgeMap = targets.iter().copied().zip(top).collect();
    let rankings: EdgeMap = targets
        .iter()
        .map(|&e| (e, rank_members(h, e, by)))
        .collect();
    Ok(Predictions {
        aggregated,
        targets,
        predictions,
        rankings,
    })
}

/// Stage 1 on the training hyperedges.
pub fn run_stage1(
    h: &Hypergraph,
    x: &PairFeatureMatrix,
    splits: &SplitAssignment,
    cfg: &PipelineConfig,
) -> Result<Stage1Output> {
    let train = splits.edges_with(h, SplitLabel::Train);
    train_stage1(h, x, &train, &cfg.stage1_config())
}

/// Stage 2 given Stage-1 scores (ignored when `α` is 0).
pub fn run_stage2(
    h: &Hypergraph,
    s1: &[f64],
    splits: &SplitAssignment,
    cfg: &PipelineConfig,
) -> Result<AnchorStrengthTable> {
    let train = splits.edges_with(h, SplitLabel::Train);
    train_stage2(h, s1, &train, &cfg.stage2_config())
}

/// Aggregation and prediction from Stage-2 strengths.
pub fn predict_from_strengths(
    h: &Hypergraph,
    strengths: &[f64],
    splits: &SplitAssignment,
    cfg: &PipelineConfig,
) -> Result<Predictions> {
    let mask = splits.train_mask(h);
    let agg = global_aggregate(strengths, h, &mask, cfg.weight, cfg.k, cfg.seed)?;
    let targets = target_edges(h, splits);
    if cfg.ablations.no_ga {
        let by = RankBy::Strengths(strengths);
        collect(h, targets, &by, cfg.k, Some(agg))
    } else {
        let proportions = agg.proportions.clone();
        let by = RankBy::Aggregated {
            proportions: &proportions,
            strengths,
        };
        collect(h, targets, &by, cfg.k, Some(agg))
    }
}

/// Prediction straight from Stage-1 scores.
pub fn predict_from_scores(
    h: &Hypergraph,
    s1: &[f64],
    splits: &SplitAssignment,
    k: usize,
) -> Result<Predictions> {
    collect(h, target_edges(h, splits), &RankBy::Scores(s1), k, None)
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub stage1: Option<Stage1Output>,
    pub stage2: Option<AnchorStrengthTable>,
    pub predictions: Predictions,
}

/// Full run on a prepared feature matrix.
pub fn run_pipeline(
    h: &Hypergraph,
    x: &PairFeatureMatrix,
    splits: &SplitAssignment,
    cfg: &PipelineConfig,
) -> Result<PipelineOutput> {
    cfg.validate()?;
    h.require_anchor_count(cfg.k)?;
    let stage1 = if cfg.ablations.stage2_only {
        None
    } else {
        Some(run_stage1(h, x, splits, cfg)?)
    };
    if cfg.ablations.stage1_only {
        let s1 = &stage1.as_ref().expect("stage 1 ran").scores;
        let predictions = predict_from_scores(h, s1, splits, cfg.k)?;
        return Ok(PipelineOutput {
            stage1,
            stage2: None,
            predictions,
        });
    }
    let zeros;
    let s1: &[f64] = match &stage1 {
        Some(out) => &out.scores,
        None => {
            zeros = alloc::vec![0.0; h.incidence_count()];
            &zeros
        }
    };
    let stage2 = run_stage2(h, s1, splits, cfg)?;
    let predictions = predict_from_strengths(h, &stage2.strengths, splits, cfg)?;
    Ok(PipelineOutput {
        stage1,
        stage2: Some(stage2),
        predictions,
    })
}

/// Applies a Stage-1 model trained elsewhere to an unlabeled hypergraph.
///
/// Provisional winners are the top Stage-1 scores (seeded ties), the
/// aggregation runs with no training hyperedges, and final ranking uses
/// the aggregated proportion, then the Stage-1 score, then node index.
/// Every hyperedge with at least `k` members is a target.
pub fn inductive_predict(
    model: &Stage1Model,
    h: &Hypergraph,
    x: &PairFeatureMatrix,
    k: usize,
    seed: u64,
) -> Result<Predictions> {
    let s1 = model.forward(x)?;
    let mask = alloc::vec![false; h.edge_count()];
    let agg = aggregate_by_incidence(h, &s1, &mask, 1.0, k, seed)?;
    let targets: Vec<usize> = (0..h.edge_count())
        .filter(|&e| h.edge(e).len() >= k.max(2))
        .collect();
    let proportions = agg.proportions.clone();
    let by = RankBy::AggregatedThenScores {
        proportions: &proportions,
        scores: &s1,
    };
    collect(h, targets, &by, k, Some(agg))
}
