//! One-sided p-values for the purity comparison.

use anchorradar_core::stats::{purity_comparison, WelchT};
use anchorradar_core::{Hypergraph, Result};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// `P(T ≥ t)` under the Welch null, i.e. the p-value of the alternative
/// `mean_a > mean_b`.
///
/// With zero standard error the test degenerates: the p-value is 0 if
/// the first mean is larger, 1 if smaller and 0.5 if equal.
pub fn one_sided_p(w: &WelchT) -> f64 {
    if !(w.se > 0.0) || !w.df.is_finite() {
        return match w.mean_a.partial_cmp(&w.mean_b) {
            Some(std::cmp::Ordering::Greater) => 0.0,
            Some(std::cmp::Ordering::Less) => 1.0,
            _ => 0.5,
        };
    }
    let dist = StudentsT::new(0.0, 1.0, w.df).expect("positive degrees of freedom");
    dist.sf(w.t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuritySignificance {
    pub welch: WelchT,
    pub p_value: f64,
}

/// Real purity against anchors re-drawn uniformly in each hyperedge.
pub fn purity_significance(
    h: &Hypergraph,
    edges: &[usize],
    seed: u64,
) -> Result<PuritySignificance> {
    let welch = purity_comparison(h, edges, seed)?;
    Ok(PuritySignificance {
        welch,
        p_value: one_sided_p(&welch),
    })
}
