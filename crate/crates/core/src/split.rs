//! Train/validation/test assignment over unique hyperedges.
//!
//! Splitting happens on unique member sets so the same group of nodes never
//! lands in two categories. Size-1 hyperedges are featurized but never
//! split; they carry [`SplitLabel::Excluded`].

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::math::floor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitLabel {
    Train,
    Validation,
    Test,
    Excluded,
}

impl SplitLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitLabel::Train => "train",
            SplitLabel::Validation => "validation",
            SplitLabel::Test => "test",
            SplitLabel::Excluded => "excluded",
        }
    }
}

impl fmt::Display for SplitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitLabel {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "train" => Ok(SplitLabel::Train),
            "validation" => Ok(SplitLabel::Validation),
            "test" => Ok(SplitLabel::Test),
            "excluded" => Ok(SplitLabel::Excluded),
            _ => Err(()),
        }
    }
}

/// Fractions of eligible unique hyperedges per category.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub validation: f64,
    pub test: f64,
}

impl SplitRatios {
    /// 7.5% / 2.5% / 90%.
    pub const LABEL_SCARCE: SplitRatios = SplitRatios {
        train: 0.075,
        validation: 0.025,
        test: 0.90,
    };

    pub fn new(train: f64, validation: f64, test: f64) -> Result<Self> {
        let r = SplitRatios {
            train,
            validation,
            test,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.train, self.validation, self.test];
        if parts.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidRatios);
        }
        if (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidRatios);
        }
        Ok(())
    }
}

/// Split label per unique hyperedge key.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitAssignment {
    labels: Vec<SplitLabel>,
    seed: u64,
    ratios: Option<SplitRatios>,
}

/// Bucket size for one ratio: floor with a minimum of 1 when the ratio is
/// positive. The small epsilon absorbs products like `0.075 * 40` landing a
/// hair below an integer.
fn bucket_size(ratio: f64, eligible: usize) -> usize {
    if ratio <= 0.0 {
        return 0;
    }
    let n = floor(ratio * eligible as f64 + 1e-9) as usize;
    n.max(1)
}

/// Seeded split of the unique hyperedges of size ≥ 2.
///
/// Eligible keys (first-seen order) are shuffled; the first
/// `⌊r_train·K⌋` (min 1) become train, the next `⌊r_val·K⌋` (min 1)
/// validation, and the rest test.
pub fn make_splits(h: &Hypergraph, ratios: SplitRatios, seed: u64) -> Result<SplitAssignment> {
    ratios.validate()?;
    let mut labels = alloc::vec![SplitLabel::Excluded; h.unique_count()];
    let mut eligible: Vec<usize> = (0..h.unique_count())
        .filter(|&k| h.unique_members(k).len() >= 2)
        .collect();
    let k = eligible.len();
    if k < 3 {
        return Err(Error::NotEnoughUniqueEdges { found: k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    eligible.shuffle(&mut rng);

    let n_train = bucket_size(ratios.train, k).min(k);
    let n_val = bucket_size(ratios.validation, k).min(k - n_train);
    for (i, &key) in eligible.iter().enumerate() {
        labels[key] = if i < n_train {
            SplitLabel::Train
        } else if i < n_train + n_val {
            SplitLabel::Validation
        } else {
            SplitLabel::Test
        };
    }
    Ok(SplitAssignment {
        labels,
        seed,
        ratios: Some(ratios),
    })
}

impl SplitAssignment {
    /// Wraps externally supplied labels (one per unique key), checking that
    /// exactly the size-1 keys are excluded.
    pub fn from_labels(h: &Hypergraph, labels: Vec<SplitLabel>) -> Result<Self> {
        if labels.len() != h.unique_count() {
            return Err(Error::SplitSizeMismatch {
                expected: h.unique_count(),
                found: labels.len(),
            });
        }
        for (key, label) in labels.iter().enumerate() {
            let singleton = h.unique_members(key).len() < 2;
            if singleton != (*label == SplitLabel::Excluded) {
                return Err(Error::InvalidSplitLabel { key });
            }
        }
        Ok(SplitAssignment {
            labels,
            seed: 0,
            ratios: None,
        })
    }

    pub fn labels(&self) -> &[SplitLabel] {
        &self.labels
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn ratios(&self) -> Option<SplitRatios> {
        self.ratios
    }

    pub fn label_of_key(&self, key: usize) -> SplitLabel {
        self.labels[key]
    }

    pub fn label_of_edge(&self, h: &Hypergraph, e: usize) -> SplitLabel {
        self.labels[h.unique_key(e)]
    }

    /// Edge positions (with repeats) whose unique key has `label`.
    pub fn edges_with(&self, h: &Hypergraph, label: SplitLabel) -> Vec<usize> {
        (0..h.edge_count())
            .filter(|&e| self.label_of_edge(h, e) == label)
            .collect()
    }

    /// Per-edge flag marking the training hyperedges `E'`.
    pub fn train_mask(&self, h: &Hypergraph) -> Vec<bool> {
        (0..h.edge_count())
            .map(|e| self.label_of_edge(h, e) == SplitLabel::Train)
            .collect()
    }

    pub fn count_keys(&self, label: SplitLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn pairs(n: u32) -> Hypergraph {
        // n distinct pairs {i, i+1}
        let edges: Vec<Vec<u32>> = (0..n).map(|i| vec![i, i + 1]).collect();
        let anchors = (0..n).map(|i| vec![i]).collect();
        Hypergraph::from_edges(n as usize + 1, edges, anchors).unwrap()
    }

    #[test]
    fn floor_counts_on_forty_keys() {
        let h = pairs(40);
        let s = make_splits(&h, SplitRatios::LABEL_SCARCE, 1).unwrap();
        assert_eq!(s.count_keys(SplitLabel::Train), 3);
        assert_eq!(s.count_keys(SplitLabel::Validation), 1);
        assert_eq!(s.count_keys(SplitLabel::Test), 36);
    }

    #[test]
    fn same_seed_same_assignment() {
        let h = pairs(100);
        let a = make_splits(&h, SplitRatios::LABEL_SCARCE, 7).unwrap();
        let b = make_splits(&h, SplitRatios::LABEL_SCARCE, 7).unwrap();
        assert_eq!(a, b);
        let c = make_splits(&h, SplitRatios::LABEL_SCARCE, 8).unwrap();
        assert_ne!(a.labels(), c.labels());
    }

    #[test]
    fn duplicates_share_split() {
        let h = Hypergraph::from_edges(
            5,
            vec![
                vec![0, 1],
                vec![1, 2],
                vec![0, 1],
                vec![2, 3],
                vec![0, 1],
                vec![3, 4],
            ],
            vec![vec![0], vec![1], vec![1], vec![2], vec![0], vec![3]],
        )
        .unwrap();
        let s = make_splits(&h, SplitRatios::LABEL_SCARCE, 3).unwrap();
        let l = s.label_of_edge(&h, 0);
        assert_eq!(s.label_of_edge(&h, 2), l);
        assert_eq!(s.label_of_edge(&h, 4), l);
    }

    #[test]
    fn singletons_excluded_and_too_few_keys() {
        let h = Hypergraph::from_edges(
            3,
            vec![vec![0], vec![0, 1], vec![1, 2]],
            vec![vec![0], vec![0], vec![1]],
        )
        .unwrap();
        assert_eq!(
            make_splits(&h, SplitRatios::LABEL_SCARCE, 0).unwrap_err(),
            Error::NotEnoughUniqueEdges { found: 2 }
        );
        let h = Hypergraph::from_edges(
            4,
            vec![vec![0], vec![0, 1], vec![1, 2], vec![2, 3]],
            vec![vec![0], vec![0], vec![1], vec![2]],
        )
        .unwrap();
        let s = make_splits(&h, SplitRatios::LABEL_SCARCE, 0).unwrap();
        assert_eq!(s.label_of_edge(&h, 0), SplitLabel::Excluded);
        assert_eq!(s.count_keys(SplitLabel::Train), 1);
        assert_eq!(s.count_keys(SplitLabel::Validation), 1);
        assert_eq!(s.count_keys(SplitLabel::Test), 1);
    }

    #[test]
    fn bad_ratios_rejected() {
        assert!(SplitRatios::new(0.5, 0.5, 0.5).is_err());
        assert!(SplitRatios::new(-0.1, 0.1, 1.0).is_err());
    }

    #[test]
    fn from_labels_checks_exclusion() {
        let h = pairs(3);
        let ok = vec![SplitLabel::Train, SplitLabel::Validation, SplitLabel::Test];
        assert!(SplitAssignment::from_labels(&h, ok).is_ok());
        let bad = vec![
            SplitLabel::Excluded,
            SplitLabel::Validation,
            SplitLabel::Test,
        ];
        assert!(SplitAssignment::from_labels(&h, bad).is_err());
    }
}
