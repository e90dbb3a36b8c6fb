//! Frequency and recency reference recommenders.
//!
//! Each isolates one of the two signals BLL combines: how often a hashtag was
//! used (globally, by the user, by followees) or how recently the user last
//! used it. Only events strictly before `now` are counted.

use crate::corpus::{FollowGraph, Timestamp, UsageIndex};
use crate::ScoredList;
use std::collections::BTreeMap;

/// Most popular hashtags overall.
pub fn mp_global(index: &UsageIndex, now: Timestamp, k: usize) -> ScoredList {
    let mut counts: Vec<(&str, usize)> = index.global_counts_before(now).collect();
    // cut to the k best by (count desc, hashtag asc) before building strings
    if k < counts.len() {
        counts.select_nth_unstable_by(k, |a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        counts.truncate(k);
    }
    ScoredList::top_k(counts.into_iter().map(|(t, n)| (t, n as f64)), k)
}

/// The user's most frequently used hashtags.
pub fn mp_user(index: &UsageIndex, user: &str, now: Timestamp, k: usize) -> ScoredList {
    let counts = index
        .user_history_before(user, now)
        .map(|(tag, times)| (tag, times.len() as f64));
    ScoredList::top_k(counts, k)
}

/// Hashtags most used by the user's followees, pooled.
pub fn mp_social(
    index: &UsageIndex,
    graph: &FollowGraph,
    user: &str,
    now: Timestamp,
    k: usize,
) -> ScoredList {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for followee in graph.followees(user) {
        for (tag, times) in index.user_history_before(followee, now) {
            *counts.entry(tag).or_default() += times.len();
        }
    }
    ScoredList::top_k(counts.into_iter().map(|(t, n)| (t, n as f64)), k)
}

/// The user's hashtags by most recent use; score is minus the age in seconds.
pub fn most_recent(index: &UsageIndex, user: &str, now: Timestamp, k: usize) -> ScoredList {
    let scores = index.user_history_before(user, now).filter_map(|(tag, times)| {
        let last = *times.last()?;
        let age = now.age_of(last)?;
        Some((tag, -(age as f64)))
    });
    ScoredList::top_k(scores, k)
}
