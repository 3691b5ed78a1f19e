//! Anchor degree, proportion and purity per node, purity comparison
//! against randomized anchors, and the proportion-oracle accuracy.

use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::math::sqrt;

/// Per-node statistics over a chosen subset of hyperedges.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorStats {
    /// Number of subset hyperedges containing the node.
    pub degree: Vec<u32>,
    /// Number of those in which it is an anchor.
    pub anchor_degree: Vec<u32>,
}

fn choose2(n: u32) -> f64 {
    let n = f64::from(n);
    n * (n - 1.0) / 2.0
}

/// Probability that two distinct hyperedges of a node agree on whether it
/// is their anchor. `None` when `d < 2`.
pub fn purity(anchor_degree: u32, degree: u32) -> Option<f64> {
    if degree < 2 {
        return None;
    }
    let agree = choose2(anchor_degree) + choose2(degree - anchor_degree);
    Some(agree / choose2(degree))
}

impl AnchorStats {
    pub fn proportion(&self, v: NodeId) -> Option<f64> {
        let d = self.degree[v as usize];
        (d > 0).then(|| f64::from(self.anchor_degree[v as usize]) / f64::from(d))
    }

    pub fn purity(&self, v: NodeId) -> Option<f64> {
        purity(self.anchor_degree[v as usize], self.degree[v as usize])
    }

    /// Purity of every node with subset degree ≥ 2, in node order.
    pub fn purities(&self) -> Vec<f64> {
        (0..self.degree.len() as NodeId)
            .filter_map(|v| self.purity(v))
            .collect()
    }

    /// Proportion per node, 0 for nodes outside the subset.
    pub fn proportions(&self) -> Vec<f64> {
        (0..self.degree.len() as NodeId)
            .map(|v| self.proportion(v).unwrap_or(0.0))
            .collect()
    }
}

pub fn anchor_stats(h: &Hypergraph, edges: &[usize]) -> AnchorStats {
    let degree = h.degrees_over(edges.iter().copied());
    let mut anchor_degree = alloc::vec![0u32; h.node_count()];
    for &e in edges {
        for &a in h.anchors(e) {
            anchor_degree[a as usize] += 1;
        }
    }
    AnchorStats {
        degree,
        anchor_degree,
    }
}

/// Copy of `h` where each hyperedge's anchors are replaced by the same
/// number of members drawn uniformly without replacement.
pub fn randomize_anchors(h: &Hypergraph, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let anchors: Vec<Vec<NodeId>> = (0..h.edge_count())
        .map(|e| {
            let members = h.edge(e);
            let k = h.anchors(e).len().min(members.len());
            sample(&mut rng, members.len(), k)
                .into_iter()
                .map(|i| members[i])
                .collect()
        })
        .collect();
    h.with_anchors(anchors)
        .expect("sampled anchors are members of their edge")
}

/// Welch two-sample t statistic for `mean(a) − mean(b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchT {
    pub mean_a: f64,
    pub mean_b: f64,
    pub std_a: f64,
    pub std_b: f64,
    pub n_a: usize,
    pub n_b: usize,
    /// Standard error of the mean difference.
    pub se: f64,
    /// `(mean_a − mean_b)/se`; infinite or NaN when `se = 0`.
    pub t: f64,
    /// Welch–Satterthwaite degrees of freedom.
    pub df: f64,
}

fn sample_mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

pub fn welch_t(a: &[f64], b: &[f64]) -> Result<WelchT> {
    let found = a.len().min(b.len());
    if found < 2 {
        return Err(Error::TooFewSamples { found, needed: 2 });
    }
    let (mean_a, var_a) = sample_mean_var(a);
    let (mean_b, var_b) = sample_mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let qa = var_a / na;
    let qb = var_b / nb;
    let se = sqrt(qa + qb);
    let df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    Ok(WelchT {
        mean_a,
        mean_b,
        std_a: sqrt(var_a),
        std_b: sqrt(var_b),
        n_a: a.len(),
        n_b: b.len(),
        se,
        t: (mean_a - mean_b) / se,
        df,
    })
}

/// Purity of the real anchors against a randomized copy over the same
/// hyperedges.
pub fn purity_comparison(h: &Hypergraph, edges: &[usize], seed: u64) -> Result<WelchT> {
    let real = anchor_stats(h, edges).purities();
    let shuffled = randomize_anchors(h, seed);
    let random = anchor_stats(&shuffled, edges).purities();
    welch_t(&real, &random)
}

/// Accuracy of predicting, in each hyperedge, the member(s) with the
/// highest true anchor proportion (computed over `edges`; ties to the
/// lower node index).
pub fn proportion_oracle_accuracy(h: &Hypergraph, edges: &[usize]) -> f64 {
    if edges.is_empty() {
        return 0.0;
    }
    let p = anchor_stats(h, edges).proportions();
    let mut hits = 0usize;
    for &e in edges {
        let mut members = h.edge(e).to_vec();
        // Members are sorted, so a stable sort keeps lower indices first.
        members.sort_by(|a, b| p[*b as usize].total_cmp(&p[*a as usize]));
        members.truncate(h.anchors(e).len());
        if crate::stage2::same_set(&members, h.anchors(e)) {
            hits += 1;
        }
    }
    hits as f64 / edges.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn purity_closed_form_cases() {
        assert!((purity(2, 4).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(purity(3, 3), Some(1.0));
        assert_eq!(purity(0, 3), Some(1.0));
        assert_eq!(purity(1, 1), None);
    }

    #[test]
    fn purity_of_two_of_four_by_enumeration() {
        let flags = [true, true, false, false];
        let mut agree = 0;
        let mut pairs = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                pairs += 1;
                if flags[i] == flags[j] {
                    agree += 1;
                }
            }
        }
        assert_eq!((agree, pairs), (2, 6));
        assert_eq!(purity(2, 4).unwrap(), agree as f64 / pairs as f64);
    }

    #[test]
    fn stats_on_subset() {
        let h = Hypergraph::from_edges(
            3,
            vec![vec![0, 1], vec![0, 2], vec![0, 1, 2]],
            vec![vec![0], vec![0], vec![1]],
        )
        .unwrap();
        let s = anchor_stats(&h, &[0, 1, 2]);
        assert_eq!(s.degree, vec![3, 2, 2]);
        assert_eq!(s.anchor_degree, vec![2, 1, 0]);
        assert!((s.proportion(0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let s = anchor_stats(&h, &[0]);
        assert_eq!(s.purity(0), None);
        assert_eq!(s.proportion(2), None);
    }

    #[test]
    fn welch_sign_and_validation() {
        let w = welch_t(&[1.0, 2.0, 3.0], &[0.0, 0.5, 1.0]).unwrap();
        assert!(w.t > 0.0);
        let w = welch_t(&[0.0, 0.5, 1.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(w.t < 0.0);
        assert_eq!(
            welch_t(&[1.0], &[1.0, 2.0]).unwrap_err(),
            Error::TooFewSamples {
                found: 1,
                needed: 2
            }
        );
    }

    #[test]
    fn oracle_on_separable_data() {
        let h = Hypergraph::from_edges(
            4,
            vec![vec![0, 1], vec![0, 2], vec![1, 3], vec![2, 3]],
            vec![vec![0], vec![0], vec![1], vec![2]],
        )
        .unwrap();
        assert_eq!(proportion_oracle_accuracy(&h, &[0, 1, 2, 3]), 1.0);
    }

    #[test]
    fn oracle_capped_by_conflicting_duplicates() {
        let h = Hypergraph::from_edges(2, vec![vec![0, 1], vec![0, 1]], vec![vec![0], vec![1]])
            .unwrap();
        assert_eq!(proportion_oracle_accuracy(&h, &[0, 1]), 0.5);
    }

    #[test]
    fn randomized_anchors_are_members() {
        let h = Hypergraph::from_edges(
            4,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 3]],
            vec![vec![0], vec![3], vec![3]],
        )
        .unwrap();
        let r = randomize_anchors(&h, 3);
        assert_eq!(r, randomize_anchors(&h, 3));
        for e in 0..3 {
            assert_eq!(r.anchors(e).len(), 1);
            assert!(h.edge(e).contains(&r.anchors(e)[0]));
        }
    }
}
