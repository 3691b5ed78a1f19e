use alloc::vec::Vec;

/// Values closer than this (relative) rank as ties, so that round-off in
/// iterative centralities cannot order symmetric nodes.
const TIE_RELATIVE: f64 = 1e-10;

fn nearly_equal(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= TIE_RELATIVE * a.abs().max(b.abs())
}

/// `(x - min) / (max - min)`; every entry is 0.5 when all values coincide.
pub fn min_max(values: &[f64]) -> Vec<f64> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if values.is_empty() {
        return Vec::new();
    }
    if nearly_equal(lo, hi) {
        return alloc::vec![0.5; values.len()];
    }
    let span = hi - lo;
    values
        .iter()
        .map(|&x| ((x - lo) / span).clamp(0.0, 1.0))
        .collect()
}

/// Zero-indexed descending ranks with ties sharing their average rank.
pub fn descending_fractional_rank(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && nearly_equal(values[order[end - 1]], values[order[end]]) {
            end += 1;
        }
        let avg = (start + end - 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Descending rank divided by `n - 1`; 0.5 for a single value.
pub fn rank_normalize(values: &[f64]) -> Vec<f64> {
    if values.len() == 1 {
        return alloc::vec![0.5];
    }
    let denom = (values.len() - 1) as f64;
    descending_fractional_rank(values)
        .into_iter()
        .map(|r| r / denom)
        .collect()
}
