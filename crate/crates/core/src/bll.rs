//! Base-level learning activations and the BLL_I,S recommender.
//!
//! A hashtag's activation for a user is `ln(Σ_j age_j^(-d))` over its past
//! uses, where `age_j` is the time since use `j`. Individual activations use
//! the user's own uses; social activations pool the uses of every followee.
//! Each component is softmax-normalized over its candidates, then the two are
//! mixed as `beta·individual + (1-beta)·social`.

use crate::corpus::{FollowGraph, Timestamp, UsageIndex};
use crate::{Error, Result, ScoredList};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const DEFAULT_DECAY: f64 = 0.5;
pub const DEFAULT_BETA: f64 = 0.5;

/// Hashtag → score, ordered by hashtag so every downstream fold is
/// deterministic.
pub type ScoreMap = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivationParams {
    /// Decay exponent for the user's own uses.
    pub d_individual: f64,
    /// Decay exponent for followee uses.
    pub d_social: f64,
    /// Weight of the individual component in `[0, 1]`.
    pub beta: f64,
    /// Ages below this many seconds are raised to it.
    pub min_age: u64,
}

impl Default for ActivationParams {
    fn default() -> Self {
        Self {
            d_individual: DEFAULT_DECAY,
            d_social: DEFAULT_DECAY,
            beta: DEFAULT_BETA,
            min_age: 1,
        }
    }
}

impl ActivationParams {
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.d_individual.is_finite() && self.d_individual > 0.0) {
            bad.push(format!("d_individual must be > 0 (got {})", self.d_individual));
        }
        if !(self.d_social.is_finite() && self.d_social > 0.0) {
            bad.push(format!("d_social must be > 0 (got {})", self.d_social));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            bad.push(format!("beta must be in [0, 1] (got {})", self.beta));
        }
        if self.min_age < 1 {
            bad.push("min_age must be >= 1".to_string());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParam(bad.join("; ")))
        }
    }

    fn age(&self, now: Timestamp, used: Timestamp) -> f64 {
        now.seconds().saturating_sub(used.seconds()).max(self.min_age) as f64
    }
}

/// `ln(Σ age^(-d))`, or `None` when there are no uses.
///
/// Evaluated as a log-sum-exp over `-d·ln(age)` so very old or very numerous
/// uses neither underflow nor overflow. Ages must be positive.
pub fn base_level_activation(ages: &[f64], d: f64) -> Option<f64> {
    if ages.is_empty() {
        return None;
    }
    debug_assert!(ages.iter().all(|&a| a > 0.0), "ages must be positive");
    let max = ages
        .iter()
        .map(|&a| -d * a.ln())
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = ages.iter().map(|&a| (-d * a.ln() - max).exp()).sum();
    Some(max + sum.ln())
}

/// Activation of every hashtag `user` used strictly before `now`.
pub fn individual_activations(
    index: &UsageIndex,
    user: &str,
    now: Timestamp,
    params: &ActivationParams,
) -> ScoreMap {
    index
        .user_history_before(user, now)
        .filter_map(|(tag, times)| {
            let ages: Vec<f64> = times.iter().map(|&t| params.age(now, t)).collect();
            base_level_activation(&ages, params.d_individual).map(|b| (tag.to_owned(), b))
        })
        .collect()
}

/// Activation of every hashtag used by at least one followee before `now`,
/// pooling all followee uses into a single history.
pub fn social_activations(
    index: &UsageIndex,
    graph: &FollowGraph,
    user: &str,
    now: Timestamp,
    params: &ActivationParams,
) -> ScoreMap {
    let mut pooled: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for followee in graph.followees(user) {
        for (tag, times) in index.user_history_before(followee, now) {
            pooled
                .entry(tag)
                .or_default()
                .extend(times.iter().map(|&t| params.age(now, t)));
        }
    }
    pooled
        .into_iter()
        .filter_map(|(tag, ages)| {
            base_level_activation(&ages, params.d_social).map(|b| (tag.to_owned(), b))
        })
        .collect()
}

/// Max-shifted softmax. Empty in, empty out.
pub fn normalize_softmax(scores: &ScoreMap) -> ScoreMap {
    let Some(max) = scores.values().copied().reduce(f64::max) else {
        return ScoreMap::new();
    };
    let exps: Vec<f64> = scores.values().map(|&s| (s - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    scores
        .keys()
        .zip(exps)
        .map(|(h, e)| (h.clone(), e / total))
        .collect()
}

/// `weight·first(h) + (1-weight)·second(h)` over the union of keys, with a
/// missing side counting as 0.
pub fn mix_scores(first: &ScoreMap, second: &ScoreMap, weight: f64) -> ScoreMap {
    let mut out = ScoreMap::new();
    for h in first.keys().chain(second.keys()) {
        if out.contains_key(h) {
            continue;
        }
        let a = first.get(h).copied().unwrap_or(0.0);
        let b = second.get(h).copied().unwrap_or(0.0);
        out.insert(h.clone(), weight * a + (1.0 - weight) * b);
    }
    out
}

/// Unranked BLL_I,S scores for every candidate.
pub fn bll_is_scores(
    index: &UsageIndex,
    graph: &FollowGraph,
    user: &str,
    now: Timestamp,
    params: &ActivationParams,
) -> ScoreMap {
    let individual = normalize_softmax(&individual_activations(index, user, now, params));
    let social = normalize_softmax(&social_activations(index, graph, user, now, params));
    mix_scores(&individual, &social, params.beta)
}

/// Top-`k` hashtags by BLL_I,S score.
pub fn recommend_bll_is(
    index: &UsageIndex,
    graph: &FollowGraph,
    user: &str,
    now: Timestamp,
    params: &ActivationParams,
    k: usize,
) -> ScoredList {
    ScoredList::top_k(bll_is_scores(index, graph, user, now, params), k)
}
