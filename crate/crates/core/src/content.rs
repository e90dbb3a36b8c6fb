//! Token → hashtag association profiles and the hybrid BLL_I,S,C ranker.

use crate::bll::{bll_is_scores, mix_scores, normalize_softmax, ActivationParams, ScoreMap};
use crate::corpus::{FollowGraph, Timestamp, Tweet, UsageIndex};
use crate::{Error, Result, ScoredList};
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub const DEFAULT_LAMBDA: f64 = 0.5;

/// Document frequencies and token/hashtag co-occurrence counts from a set of
/// training tweets.
#[derive(Debug, Clone, Default)]
pub struct TokenHashtagProfile {
    doc_count: usize,
    df: HashMap<String, usize>,
    assoc: HashMap<String, BTreeMap<String, usize>>,
}

impl TokenHashtagProfile {
    /// Tweets that carried at least one token.
    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn df(&self, token: &str) -> Option<usize> {
        self.df.get(token).copied()
    }

    pub fn assoc(&self, token: &str, hashtag: &str) -> usize {
        self.assoc
            .get(token)
            .and_then(|m| m.get(hashtag))
            .copied()
            .unwrap_or(0)
    }

    /// `ln(doc_count / df)`, or `None` for a token never seen in training.
    pub fn idf(&self, token: &str) -> Option<f64> {
        let df = self.df(token)?;
        Some((self.doc_count as f64 / df as f64).ln())
    }
}

/// Counts over the given tweets. Tweets with no tokens are skipped; tweets
/// without hashtags still count toward `df` and `doc_count`.
pub fn build_profiles<'a, I>(tweets: I) -> TokenHashtagProfile
where
    I: IntoIterator<Item = &'a Tweet>,
{
    let mut profile = TokenHashtagProfile::default();
    for tweet in tweets {
        let Some(tokens) = tweet.tokens.as_deref().filter(|t| !t.is_empty()) else {
            continue;
        };
        profile.doc_count += 1;
        let distinct: BTreeSet<&str> = tokens.iter().map(String::as_str).collect();
        for token in distinct {
            *profile.df.entry(token.to_owned()).or_default() += 1;
            if tweet.hashtags.is_empty() {
                continue;
            }
            let row = profile.assoc.entry(token.to_owned()).or_default();
            for tag in &tweet.hashtags {
                *row.entry(tag.clone()).or_default() += 1;
            }
        }
    }
    profile
}

/// `Σ_w tf(w)·idf(w)·P(h | w)` over the distinct tokens of the current tweet,
/// where `P(h | w)` is the share of `w`'s co-occurrences that went to `h`.
pub fn content_scores(profile: &TokenHashtagProfile, tokens: &[String]) -> ScoreMap {
    let mut tf: BTreeMap<&str, usize> = BTreeMap::new();
    for t in tokens {
        *tf.entry(t.as_str()).or_default() += 1;
    }

    let mut scores = ScoreMap::new();
    for (token, count) in tf {
        let Some(idf) = profile.idf(token) else {
            continue;
        };
        let Some(row) = profile.assoc.get(token) else {
            continue;
        };
        let total: usize = row.values().sum();
        let weight = count as f64 * idf;
        for (tag, &n) in row {
            *scores.entry(tag.clone()).or_default() += weight * n as f64 / total as f64;
        }
    }
    scores
}

/// Unranked BLL_I,S,C scores: `lambda·bll_is + (1-lambda)·softmax(content)`.
/// At `lambda` 1 or 0 the other side contributes no candidates, so the
/// result is exactly the BLL_I,S or the softmaxed content scores.
#[allow(clippy::too_many_arguments)]
pub fn bll_isc_scores(
    index: &UsageIndex,
    graph: &FollowGraph,
    profile: &TokenHashtagProfile,
    user: &str,
    now: Timestamp,
    tokens: &[String],
    params: &ActivationParams,
    lambda: f64,
) -> Result<ScoreMap> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParam(format!(
            "lambda must be in [0, 1] (got {lambda})"
        )));
    }
    if lambda == 1.0 {
        return Ok(bll_is_scores(index, graph, user, now, params));
    }
    let content = normalize_softmax(&content_scores(profile, tokens));
    if lambda == 0.0 {
        return Ok(content);
    }
    let bll = bll_is_scores(index, graph, user, now, params);
    Ok(mix_scores(&bll, &content, lambda))
}

#[allow(clippy::too_many_arguments)]
pub fn recommend_bll_isc(
    index: &UsageIndex,
    graph: &FollowGraph,
    profile: &TokenHashtagProfile,
    user: &str,
    now: Timestamp,
    tokens: &[String],
    params: &ActivationParams,
    lambda: f64,
    k: usize,
) -> Result<ScoredList> {
    let scores = bll_isc_scores(index, graph, profile, user, now, tokens, params, lambda)?;
    Ok(ScoredList::top_k(scores, k))
}
