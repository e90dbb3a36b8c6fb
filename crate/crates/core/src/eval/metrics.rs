//! Binary-relevance top-k metrics.
//!
//! `ranked` is a recommendation list best-first; `relevant` is the set of
//! hashtags actually used. All functions return values in `[0, 1]`.

use std::collections::BTreeSet;

fn hits<S: AsRef<str>>(ranked: &[S], relevant: &BTreeSet<String>, k: usize) -> usize {
    ranked
        .iter()
        .take(k)
        .filter(|h| relevant.contains(h.as_ref()))
        .count()
}

/// Hits in the top `k` divided by `k`, even when fewer than `k` items were
/// recommended.
pub fn precision_at_k<S: AsRef<str>>(ranked: &[S], relevant: &BTreeSet<String>, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    hits(ranked, relevant, k) as f64 / k as f64
}

pub fn recall_at_k<S: AsRef<str>>(ranked: &[S], relevant: &BTreeSet<String>, k: usize) -> f64 {
    if relevant.is_empty() {
        return 0.0;
    }
    hits(ranked, relevant, k) as f64 / relevant.len() as f64
}

/// Reciprocal rank of the first relevant item; 0 if none is ranked.
pub fn reciprocal_rank<S: AsRef<str>>(ranked: &[S], relevant: &BTreeSet<String>) -> f64 {
    ranked
        .iter()
        .position(|h| relevant.contains(h.as_ref()))
        .map_or(0.0, |i| 1.0 / (i + 1) as f64)
}

/// Average precision over the top `k`, normalized by `|relevant|`.
pub fn average_precision<S: AsRef<str>>(ranked: &[S], relevant: &BTreeSet<String>, k: usize) -> f64 {
    if relevant.is_empty() {
        return 0.0;
    }
    let mut found = 0usize;
    let mut sum = 0.0;
    for (i, h) in ranked.iter().take(k).enumerate() {
        if relevant.contains(h.as_ref()) {
            found += 1;
            sum += found as f64 / (i + 1) as f64;
        }
    }
    sum / relevant.len() as f64
}

/// DCG over the top `k` divided by the ideal DCG of `min(|relevant|, k)` hits.
pub fn ndcg_at_k<S: AsRef<str>>(ranked: &[S], relevant: &BTreeSet<String>, k: usize) -> f64 {
    let ideal_hits = relevant.len().min(k);
    if ideal_hits == 0 {
        return 0.0;
    }
    let gain = |i: usize| 1.0 / ((i + 2) as f64).log2();
    let dcg: f64 = ranked
        .iter()
        .take(k)
        .enumerate()
        .filter(|(_, h)| relevant.contains(h.as_ref()))
        .fold(0.0, |acc, (i, _)| acc + gain(i));
    let idcg: f64 = (0..ideal_hits).map(gain).sum();
    dcg / idcg
}

/// Harmonic mean, 0 when both inputs are 0.
pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn precision_examples() {
        assert_eq!(precision_at_k(&["a", "c"], &set(&["a", "b"]), 2), 0.5);
        assert_eq!(precision_at_k::<&str>(&[], &set(&["a"]), 5), 0.0);
        assert_eq!(precision_at_k(&["a", "b"], &set(&["a", "b", "c"]), 2), 1.0);
        // short list: denominator stays k
        assert_eq!(precision_at_k(&["a"], &set(&["a"]), 4), 0.25);
    }

    #[test]
    fn recall_examples() {
        assert_eq!(recall_at_k(&["a", "c"], &set(&["a", "b"]), 2), 0.5);
        assert_eq!(recall_at_k(&["b", "x", "a"], &set(&["a", "b"]), 3), 1.0);
        assert_eq!(recall_at_k(&["x", "y"], &set(&["a"]), 2), 0.0);
    }

    #[test]
    fn ranking_metric_examples() {
        let rel = set(&["a"]);
        assert_eq!(reciprocal_rank(&["a", "x"], &rel), 1.0);
        assert_eq!(reciprocal_rank(&["x", "a"], &rel), 0.5);
        assert_eq!(average_precision(&["x", "a"], &rel, 10), 0.5);
        let expected = 1.0 / 3f64.log2();
        assert!((ndcg_at_k(&["x", "a"], &rel, 2) - expected).abs() < 1e-15);
        assert!((expected - 0.6309).abs() < 1e-4);

        let none = ["p", "q"];
        assert_eq!(reciprocal_rank(&none, &rel), 0.0);
        assert_eq!(average_precision(&none, &rel, 10), 0.0);
        assert_eq!(ndcg_at_k(&none, &rel, 2), 0.0);
        assert!(ndcg_at_k(&none, &rel, 2).is_sign_positive());
    }

    #[test]
    fn f1_edge() {
        assert_eq!(f1(0.0, 0.0), 0.0);
        assert!((f1(0.5, 1.0) - 2.0 / 3.0).abs() < 1e-15);
    }
}
