//! Accuracy, NDCG and MRR over a set of target hyperedges.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::math::log2;
use crate::stage2::same_set;

/// Predicted anchor set (or full member ranking) per edge index.
pub type EdgeMap = BTreeMap<usize, Vec<NodeId>>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub ndcg: f64,
    pub mrr: f64,
    pub edges: usize,
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        values.sum::<f64>() / n as f64
    }
}

/// Fraction of target hyperedges whose predicted anchor set equals the
/// true one.
pub fn accuracy(h: &Hypergraph, targets: &[usize], predictions: &EdgeMap) -> Result<f64> {
    let mut hits = Vec::with_capacity(targets.len());
    for &e in targets {
        let pred = predictions
            .get(&e)
            .ok_or(Error::MissingPrediction { edge: e })?;
        hits.push(if same_set(pred, h.anchors(e)) {
            1.0
        } else {
            0.0
        });
    }
    Ok(mean(hits.into_iter(), targets.len()))
}

/// 1-based positions of the anchors of `e` in `ranking`.
fn anchor_ranks(h: &Hypergraph, e: usize, ranking: &[NodeId]) -> Result<Vec<usize>> {
    let mut ranks: Vec<usize> = h
        .anchors(e)
        .iter()
        .map(|a| {
            ranking
                .iter()
                .position(|v| v == a)
                .map(|i| i + 1)
                .ok_or(Error::AnchorNotRanked { edge: e })
        })
        .collect::<Result<_>>()?;
    ranks.sort_unstable();
    Ok(ranks)
}

/// NDCG of one hyperedge with binary relevance: `1/log2(r+1)` for a single
/// anchor at rank `r`, normalized by the ideal ordering for several.
pub fn edge_ndcg(h: &Hypergraph, e: usize, ranking: &[NodeId]) -> Result<f64> {
    let ranks = anchor_ranks(h, e, ranking)?;
    let dcg: f64 = ranks.iter().map(|&r| 1.0 / log2(r as f64 + 1.0)).sum();
    let ideal: f64 = (1..=ranks.len()).map(|r| 1.0 / log2(r as f64 + 1.0)).sum();
    Ok(dcg / ideal)
}

/// Reciprocal rank of the best-ranked anchor.
pub fn edge_mrr(h: &Hypergraph, e: usize, ranking: &[NodeId]) -> Result<f64> {
    let ranks = anchor_ranks(h, e, ranking)?;
    Ok(ranks.first().map_or(0.0, |&r| 1.0 / r as f64))
}

fn ranking_of(rankings: &EdgeMap, e: usize) -> Result<&[NodeId]> {
    rankings
        .get(&e)
        .map(Vec::as_slice)
        .ok_or(Error::MissingPrediction { edge: e })
}

pub fn ndcg(h: &Hypergraph, targets: &[usize], rankings: &EdgeMap) -> Result<f64> {
    let per_edge = targets
        .iter()
        .map(|&e| edge_ndcg(h, e, ranking_of(rankings, e)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(mean(per_edge.into_iter(), targets.len()))
}

pub fn mrr(h: &Hypergraph, targets: &[usize], rankings: &EdgeMap) -> Result<f64> {
    let per_edge = targets
        .iter()
        .map(|&e| edge_mrr(h, e, ranking_of(rankings, e)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(mean(per_edge.into_iter(), targets.len()))
}

/// All three metrics over `targets`.
pub fn evaluate(
    h: &Hypergraph,
    targets: &[usize],
    predictions: &EdgeMap,
    rankings: &EdgeMap,
) -> Result<MetricsReport> {
    Ok(MetricsReport {
        accuracy: accuracy(h, targets, predictions)?,
        ndcg: ndcg(h, targets, rankings)?,
        mrr: mrr(h, targets, rankings)?,
        edges: targets.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn three_edges() -> Hypergraph {
        Hypergraph::from_edges(
            4,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 3]],
            vec![vec![0], vec![3], vec![3]],
        )
        .unwrap()
    }

    #[test]
    fn accuracy_counts_matches() {
        let h = three_edges();
        let mut p = EdgeMap::new();
        p.insert(0, vec![0]);
        p.insert(1, vec![3]);
        p.insert(2, vec![0]);
        let acc = accuracy(&h, &[0, 1, 2], &p).unwrap();
        assert!((acc - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(accuracy(&h, &[0, 1], &p).unwrap(), 1.0);
        p.remove(&2);
        assert_eq!(
            accuracy(&h, &[2], &p).unwrap_err(),
            Error::MissingPrediction { edge: 2 }
        );
    }

    #[test]
    fn multi_anchor_needs_exact_set() {
        let h = Hypergraph::from_edges(3, vec![vec![0, 1, 2]], vec![vec![0, 2]]).unwrap();
        let mut p = EdgeMap::new();
        p.insert(0, vec![0, 1]);
        assert_eq!(accuracy(&h, &[0], &p).unwrap(), 0.0);
        p.insert(0, vec![2, 0]);
        assert_eq!(accuracy(&h, &[0], &p).unwrap(), 1.0);
    }

    #[test]
    fn rank_based_metrics() {
        let h = three_edges();
        let mut r = EdgeMap::new();
        r.insert(0, vec![0, 1, 2]);
        r.insert(1, vec![1, 2, 3]);
        assert_eq!(edge_ndcg(&h, 0, &r[&0]).unwrap(), 1.0);
        assert_eq!(edge_ndcg(&h, 1, &r[&1]).unwrap(), 0.5);
        assert_eq!(ndcg(&h, &[0, 1], &r).unwrap(), 0.75);
        assert_eq!(edge_mrr(&h, 1, &[1, 3, 2]).unwrap(), 0.5);
        let h4 =
            Hypergraph::from_edges(4, vec![vec![0, 1, 2, 3]; 2], vec![vec![0], vec![3]]).unwrap();
        r.clear();
        r.insert(0, vec![0, 1, 2, 3]);
        r.insert(1, vec![0, 1, 2, 3]);
        assert_eq!(mrr(&h4, &[0, 1], &r).unwrap(), 0.625);
        assert_eq!(
            edge_mrr(&h, 0, &[1, 2]).unwrap_err(),
            Error::AnchorNotRanked { edge: 0 }
        );
    }
}
