//! Stage 2: one learnable anchor strength per node, global strength
//! aggregation into predicted anchor proportions, and final prediction.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::math::{ln, mean_std};
use crate::optim::Adam;
use crate::softmax::softmax_into;

pub const DEFAULT_EPOCHS: usize = 100;

fn anchor_positions(h: &Hypergraph, e: usize) -> impl Iterator<Item = usize> + '_ {
    let members = h.edge(e);
    h.anchors(e)
        .iter()
        .map(move |a| members.binary_search(a).expect("anchors are members"))
}

/// `L1 + α·L2` over the training hyperedges.
///
/// `L1` is the cross-entropy of the within-edge softmax of the strengths,
/// `L2` the negated product of the anchor's strength softmax and its
/// Stage-1 score softmax. `s1` holds one score per incidence row.
pub fn stage2_loss(
    s2: &[f64],
    s1: &[f64],
    h: &Hypergraph,
    train_edges: &[usize],
    alpha: f64,
) -> Result<f64> {
    loss_impl(s2, s1, h, train_edges, alpha, None)
}

/// Loss together with its gradient with respect to every node strength.
pub fn stage2_loss_and_gradient(
    s2: &[f64],
    s1: &[f64],
    h: &Hypergraph,
    train_edges: &[usize],
    alpha: f64,
) -> Result<(f64, Vec<f64>)> {
    let mut grad = alloc::vec![0.0; s2.len()];
    let loss = loss_impl(s2, s1, h, train_edges, alpha, Some(&mut grad))?;
    Ok((loss, grad))
}

fn loss_impl(
    s2: &[f64],
    s1: &[f64],
    h: &Hypergraph,
    train_edges: &[usize],
    alpha: f64,
    mut grad: Option<&mut Vec<f64>>,
) -> Result<f64> {
    if !(alpha >= 0.0) {
        return Err(Error::NegativeAlpha);
    }
    if s2.len() != h.node_count() {
        return Err(Error::DimensionMismatch {
            expected: h.node_count(),
            found: s2.len(),
        });
    }
    if s1.len() != h.incidence_count() {
        return Err(Error::DimensionMismatch {
            expected: h.incidence_count(),
            found: s1.len(),
        });
    }
    let mut strengths = Vec::new();
    let mut sigma = Vec::new();
    let mut tau = Vec::new();
    let mut loss = 0.0;
    for &e in train_edges {
        let members = h.edge(e);
        strengths.clear();
        strengths.extend(members.iter().map(|&v| s2[v as usize]));
        softmax_into(&strengths, &mut sigma);
        softmax_into(&s1[h.incidence_range(e)], &mut tau);
        for a in anchor_positions(h, e) {
            loss -= ln(sigma[a]);
            let c = sigma[a] * tau[a];
            loss -= alpha * c;
            if let Some(g) = grad.as_deref_mut() {
                for (u, &v) in members.iter().enumerate() {
                    let ind = if u == a { 1.0 } else { 0.0 };
                    // ∂(−log σ_a)/∂s_u = σ_u − [u=a]
                    // ∂(−σ_a τ_a)/∂s_u = −τ_a σ_a ([u=a] − σ_u)
                    g[v as usize] += (sigma[u] - ind) - alpha * c * (ind - sigma[u]);
                }
            }
        }
    }
    Ok(loss)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage2Config {
    pub lr: f64,
    pub alpha: f64,
    pub epochs: usize,
}

impl Default for Stage2Config {
    fn default() -> Self {
        Stage2Config {
            lr: 0.01,
            alpha: 0.0,
            epochs: DEFAULT_EPOCHS,
        }
    }
}

/// Learned strength per node plus its optimizer state.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorStrengthTable {
    pub strengths: Vec<f64>,
    pub optimizer: Adam,
    /// Loss before each update, then the loss of the final strengths.
    pub losses: Vec<f64>,
}

/// Adam on the strengths with Stage-1 scores frozen. Strengths start at 1.
pub fn train_stage2(
    h: &Hypergraph,
    s1: &[f64],
    train_edges: &[usize],
    cfg: &Stage2Config,
) -> Result<AnchorStrengthTable> {
    if train_edges.is_empty() {
        return Err(Error::EmptyTrainSet);
    }
    if !(cfg.lr > 0.0) {
        return Err(Error::InvalidConfig(
            "stage-2 learning rate must be positive",
        ));
    }
    let mut strengths = alloc::vec![1.0; h.node_count()];
    let mut opt = Adam::new(strengths.len(), cfg.lr);
    let mut losses = Vec::with_capacity(cfg.epochs + 1);
    for epoch in 0..cfg.epochs {
        let (loss, grad) = stage2_loss_and_gradient(&strengths, s1, h, train_edges, cfg.alpha)?;
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss {
                stage: "stage2",
                epoch,
            });
        }
        losses.push(loss);
        opt.update(&mut strengths, &grad);
    }
    let final_loss = stage2_loss(&strengths, s1, h, train_edges, cfg.alpha)?;
    if !final_loss.is_finite() {
        return Err(Error::NonFiniteLoss {
            stage: "stage2",
            epoch: cfg.epochs,
        });
    }
    losses.push(final_loss);
    Ok(AnchorStrengthTable {
        strengths,
        optimizer: opt,
        losses,
    })
}

/// Output of global strength aggregation.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedProportions {
    /// Predicted anchor proportion `p̂_v` per node.
    pub proportions: Vec<f64>,
    /// Provisional winner(s) `Â(e)` of every hyperedge.
    pub winners: Vec<Vec<NodeId>>,
    pub weight: f64,
}

/// Top-`k` positions of `values` with exact ties broken uniformly at random.
fn seeded_top_k(values: &[f64], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.shuffle(rng);
    // Stable sort keeps the shuffled order among equal values.
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    order.truncate(k);
    order
}

fn edge_rng(seed: u64, e: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(e as u64);
    rng
}

/// Aggregation with a caller-supplied score per incidence row.
///
/// Every hyperedge gets its top-`k` provisional winners (size-1 edges get
/// their only member). Training hyperedges count their true anchors with
/// weight `w`; all other hyperedges count their provisional winners with
/// weight 1; counts are divided by the full degree.
pub fn aggregate_by_incidence(
    h: &Hypergraph,
    incidence_scores: &[f64],
    train_mask: &[bool],
    weight: f64,
    k: usize,
    seed: u64,
) -> Result<AggregatedProportions> {
    if !(weight >= 0.0) {
        return Err(Error::NegativeWeight);
    }
    if incidence_scores.len() != h.incidence_count() {
        return Err(Error::DimensionMismatch {
            expected: h.incidence_count(),
            found: incidence_scores.len(),
        });
    }
    if train_mask.len() != h.edge_count() {
        return Err(Error::DimensionMismatch {
            expected: h.edge_count(),
            found: train_mask.len(),
        });
    }
    let degrees = h.degrees();
    let mut counts = alloc::vec![0.0; h.node_count()];
    let mut winners = Vec::with_capacity(h.edge_count());
    for e in 0..h.edge_count() {
        let members = h.edge(e);
        let scores = &incidence_scores[h.incidence_range(e)];
        let mut rng = edge_rng(seed, e);
        let top: Vec<NodeId> = seeded_top_k(scores, k.min(members.len()), &mut rng)
            .into_iter()
            .map(|i| members[i])
            .collect();
        if train_mask[e] {
            for &a in h.anchors(e) {
                counts[a as usize] += weight;
            }
        } else {
            for &v in &top {
                counts[v as usize] += 1.0;
            }
        }
        winners.push(top);
    }
    let proportions = counts
        .iter()
        .zip(&degrees)
        .map(|(&c, &d)| if d == 0 { 0.0 } else { c / f64::from(d) })
        .collect();
    Ok(AggregatedProportions {
        proportions,
        winners,
        weight,
    })
}

/// Global strength aggregation over node strengths `s2`.
pub fn global_aggregate(
    s2: &[f64],
    h: &Hypergraph,
    train_mask: &[bool],
    weight: f64,
    k: usize,
    seed: u64,
) -> Result<AggregatedProportions> {
    if s2.len() != h.node_count() {
        return Err(Error::DimensionMismatch {
            expected: h.node_count(),
            found: s2.len(),
        });
    }
    let per_row: Vec<f64> = h
        .edges()
        .iter()
        .flat_map(|members| members.iter().map(|&v| s2[v as usize]))
        .collect();
    aggregate_by_incidence(h, &per_row, train_mask, weight, k, seed)
}

/// Ordering key for ranking the members of a hyperedge. Comparisons are
/// descending on the primary key, then the secondary key, then ascending
/// on node index.
#[derive(Debug, Clone, Copy)]
pub enum RankBy<'a> {
    /// `p̂` then node strength.
    Aggregated {
        proportions: &'a [f64],
        strengths: &'a [f64],
    },
    /// `p̂` then Stage-1 incidence score.
    AggregatedThenScores {
        proportions: &'a [f64],
        scores: &'a [f64],
    },
    /// Node strength alone.
    Strengths(&'a [f64]),
    /// Stage-1 incidence score alone.
    Scores(&'a [f64]),
}

impl RankBy<'_> {
    fn keys(&self, h: &Hypergraph, e: usize, i: usize) -> (f64, f64) {
        let v = h.edge(e)[i] as usize;
        let row = h.incidence_range(e).start + i;
        match *self {
            RankBy::Aggregated {
                proportions,
                strengths,
            } => (proportions[v], strengths[v]),
            RankBy::AggregatedThenScores {
                proportions,
                scores,
            } => (proportions[v], scores[row]),
            RankBy::Strengths(s) => (s[v], 0.0),
            RankBy::Scores(s) => (s[row], 0.0),
        }
    }
}

/// All members of hyperedge `e`, best first.
pub fn rank_members(h: &Hypergraph, e: usize, by: &RankBy<'_>) -> Vec<NodeId> {
    let members = h.edge(e);
    let keys: Vec<(f64, f64)> = (0..members.len()).map(|i| by.keys(h, e, i)).collect();
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| {
        keys[b]
            .0
            .total_cmp(&keys[a].0)
            .then(keys[b].1.total_cmp(&keys[a].1))
            .then(members[a].cmp(&members[b]))
    });
    order.into_iter().map(|i| members[i]).collect()
}

/// The top-`k` members of every target hyperedge, in target order.
pub fn predict(
    h: &Hypergraph,
    targets: &[usize],
    by: &RankBy<'_>,
    k: usize,
) -> Result<Vec<Vec<NodeId>>> {
    targets
        .iter()
        .map(|&e| {
            let size = h.edge(e).len();
            if k > size {
                return Err(Error::TooManyAnchors { edge: e, k, size });
            }
            let mut ranked = rank_members(h, e, by);
            ranked.truncate(k);
            Ok(ranked)
        })
        .collect()
}

pub const EDGE_FEATURE_WIDTH: usize = 11;

fn order_stats(values: &[f64]) -> [f64; 5] {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let (mean, std) = mean_std(values);
    [max, min, max - min, mean, std]
}

/// Eleven strength summaries of one hyperedge: max, min, range, mean,
/// population std and sum of the raw strengths, then max, min, range,
/// mean and std of their within-edge softmax.
pub fn edge_strength_features(s2: &[f64], members: &[NodeId]) -> [f64; EDGE_FEATURE_WIDTH] {
    let raw: Vec<f64> = members.iter().map(|&v| s2[v as usize]).collect();
    let mut soft = Vec::new();
    softmax_into(&raw, &mut soft);
    let a = order_stats(&raw);
    let b = order_stats(&soft);
    let sum: f64 = raw.iter().sum();
    [
        a[0], a[1], a[2], a[3], a[4], sum, b[0], b[1], b[2], b[3], b[4],
    ]
}

/// Compares two predicted anchor sets regardless of order.
pub(crate) fn same_set(a: &[NodeId], b: &[NodeId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}
