use super::{Timestamp, Tweet};
use std::collections::HashMap;

/// Per-user and global hashtag usage timelines.
///
/// Every list is kept in ascending time order. Lookups that take a `before`
/// argument only see events strictly earlier than it, so an index built from a
/// whole training split can be queried at any point in time without leaking
/// later uses.
#[derive(Debug, Clone, Default)]
pub struct UsageIndex {
    by_user: HashMap<String, HashMap<String, Vec<Timestamp>>>,
    by_hashtag: HashMap<String, Vec<(Timestamp, String)>>,
    events: usize,
}

fn insert_sorted<T: Ord>(list: &mut Vec<T>, item: T) {
    let at = list.partition_point(|x| *x <= item);
    list.insert(at, item);
}

fn prefix_before(list: &[Timestamp], before: Timestamp) -> &[Timestamp] {
    &list[..list.partition_point(|t| *t < before)]
}

impl UsageIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one (user, hashtag) assignment at `time`.
    pub fn record(&mut self, user: &str, hashtag: &str, time: Timestamp) {
        let own = self
            .by_user
            .entry(user.to_owned())
            .or_default()
            .entry(hashtag.to_owned())
            .or_default();
        insert_sorted(own, time);
        let global = self.by_hashtag.entry(hashtag.to_owned()).or_default();
        insert_sorted(global, (time, user.to_owned()));
        self.events += 1;
    }

    pub fn add_tweet(&mut self, tweet: &Tweet) {
        for tag in &tweet.hashtags {
            self.record(&tweet.user_id, tag, tweet.time);
        }
    }

    /// Total number of recorded assignments.
    pub fn event_count(&self) -> usize {
        self.events
    }

    pub fn is_empty(&self) -> bool {
        self.events == 0
    }

    /// All of `user`'s uses of `hashtag`.
    pub fn user_uses(&self, user: &str, hashtag: &str) -> &[Timestamp] {
        self.by_user
            .get(user)
            .and_then(|m| m.get(hashtag))
            .map_or(&[], Vec::as_slice)
    }

    /// `user`'s uses of `hashtag` strictly before `before`.
    pub fn user_uses_before(&self, user: &str, hashtag: &str, before: Timestamp) -> &[Timestamp] {
        prefix_before(self.user_uses(user, hashtag), before)
    }

    /// Every hashtag `user` has used at least once strictly before `before`,
    /// with those uses.
    pub fn user_history_before(
        &self,
        user: &str,
        before: Timestamp,
    ) -> impl Iterator<Item = (&str, &[Timestamp])> {
        self.by_user
            .get(user)
            .into_iter()
            .flat_map(|m| m.iter())
            .map(move |(tag, times)| (tag.as_str(), prefix_before(times, before)))
            .filter(|(_, times)| !times.is_empty())
    }

    /// Global `(time, user)` uses of `hashtag`.
    pub fn global_uses(&self, hashtag: &str) -> &[(Timestamp, String)] {
        self.by_hashtag.get(hashtag).map_or(&[], Vec::as_slice)
    }

    pub fn global_uses_before(&self, hashtag: &str, before: Timestamp) -> &[(Timestamp, String)] {
        let all = self.global_uses(hashtag);
        &all[..all.partition_point(|(t, _)| *t < before)]
    }

    /// `(hashtag, number of uses strictly before `before`)`, zero counts omitted.
    pub fn global_counts_before(&self, before: Timestamp) -> impl Iterator<Item = (&str, usize)> {
        self.by_hashtag.iter().filter_map(move |(tag, uses)| {
            let n = uses.partition_point(|(t, _)| *t < before);
            (n > 0).then_some((tag.as_str(), n))
        })
    }

    pub fn hashtags(&self) -> impl Iterator<Item = &str> {
        self.by_hashtag.keys().map(String::as_str)
    }

    pub fn has_user(&self, user: &str) -> bool {
        self.by_user.contains_key(user)
    }
}

/// Indexes every (tweet, hashtag) assignment of the given tweets.
pub fn build_usage_index<'a, I>(tweets: I) -> UsageIndex
where
    I: IntoIterator<Item = &'a Tweet>,
{
    let mut index = UsageIndex::new();
    for tweet in tweets {
        index.add_tweet(tweet);
    }
    index
}
