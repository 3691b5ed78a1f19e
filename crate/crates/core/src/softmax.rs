//! Max-stabilized softmax helpers used inside every hyperedge.

use alloc::vec::Vec;

use crate::math::{exp, ln};

/// Softmax of `scores`, computed after subtracting the maximum.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(scores.len());
    softmax_into(scores, &mut out);
    out
}

/// Like [`softmax`] but reuses `out`.
pub fn softmax_into(scores: &[f64], out: &mut Vec<f64>) {
    out.clear();
    if scores.is_empty() {
        return;
    }
    let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.extend(scores.iter().map(|&s| exp(s - m)));
    let z: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= z);
}

/// `log Σ exp(s)` with max subtraction.
pub fn log_sum_exp(scores: &[f64]) -> f64 {
    let m = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + ln(scores.iter().map(|&s| exp(s - m)).sum::<f64>())
}

/// Log-softmax entry `i`.
pub fn log_softmax_at(scores: &[f64], i: usize) -> f64 {
    scores[i] - log_sum_exp(scores)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_and_shifted() {
        let p = softmax(&[0.0, 0.0, 0.0]);
        assert!(p.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        let a = softmax(&[1.0, 2.0, 3.0]);
        let b = softmax(&[1001.0, 1002.0, 1003.0]);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn huge_scores_stay_finite() {
        let p = softmax(&[1e300, 0.0]);
        assert_eq!(p, [1.0, 0.0]);
        assert!(log_softmax_at(&[1e300, 0.0], 1) < -1e299);
    }

    #[test]
    fn log_softmax_matches_softmax() {
        let s = [0.3, -1.2, 2.5, 0.0];
        let p = softmax(&s);
        for i in 0..s.len() {
            assert!((log_softmax_at(&s, i) - ln(p[i])).abs() < 1e-14);
        }
    }
}
