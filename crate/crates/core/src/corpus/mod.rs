//! Tweets, the follow graph and the indexes built over them.

mod index;
mod parse;
mod split;

pub use index::{build_usage_index, UsageIndex};
pub use parse::{
    normalize_hashtag, parse_follows, parse_tweets, tokenize, write_follows, write_tweets,
    FollowParse,
};
pub use split::{chronological_split, DEFAULT_HOLDOUT};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Integer seconds since the Unix epoch.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Timestamp(pub u64);

impl Timestamp {
    pub fn seconds(self) -> u64 {
        self.0
    }

    /// Seconds elapsed from `earlier` to `self`, or `None` if `earlier` is not
    /// strictly before `self`.
    pub fn age_of(self, earlier: Timestamp) -> Option<u64> {
        (earlier.0 < self.0).then(|| self.0 - earlier.0)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A single post. `hashtags` are normalized (lowercase, no leading '#').
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    pub tweet_id: String,
    pub user_id: String,
    pub time: Timestamp,
    pub hashtags: BTreeSet<String>,
    /// `None` when the record carried no text at all.
    pub tokens: Option<Vec<String>>,
}

impl Tweet {
    pub fn has_hashtags(&self) -> bool {
        !self.hashtags.is_empty()
    }

    /// Chronological sort key shared by every component.
    pub fn sort_key(&self) -> (Timestamp, &str) {
        (self.time, &self.tweet_id)
    }
}

/// Directed follower → followee edges. Never contains self-loops.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FollowGraph {
    edges: BTreeMap<String, BTreeSet<String>>,
}

impl FollowGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `follower → followee`. Returns `false` for self-loops, which are
    /// not stored.
    pub fn add_edge(&mut self, follower: &str, followee: &str) -> bool {
        if follower == followee {
            return false;
        }
        self.edges
            .entry(follower.to_owned())
            .or_default()
            .insert(followee.to_owned());
        true
    }

    pub fn follows(&self, follower: &str, followee: &str) -> bool {
        self.edges
            .get(follower)
            .is_some_and(|set| set.contains(followee))
    }

    /// Accounts followed by `user`, in ascending order.
    pub fn followees(&self, user: &str) -> impl Iterator<Item = &str> {
        self.edges
            .get(user)
            .into_iter()
            .flat_map(|set| set.iter().map(String::as_str))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// All `(follower, followee)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges
            .iter()
            .flat_map(|(a, set)| set.iter().map(move |b| (a.as_str(), b.as_str())))
    }

    /// Every user that appears on either end of an edge.
    pub fn nodes(&self) -> BTreeSet<&str> {
        self.edges().flat_map(|(a, b)| [a, b]).collect()
    }
}

/// Tweets in `(time, tweet_id)` order together with the follow graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    tweets: Vec<Tweet>,
    graph: FollowGraph,
    users: BTreeSet<String>,
}

impl Corpus {
    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }

    pub fn graph(&self) -> &FollowGraph {
        &self.graph
    }

    pub fn users(&self) -> &BTreeSet<String> {
        &self.users
    }

    /// Number of (tweet, hashtag) assignments.
    pub fn assignment_count(&self) -> usize {
        self.tweets.iter().map(|t| t.hashtags.len()).sum()
    }

    /// `(first, last)` tweet times, or `None` for an empty corpus.
    pub fn time_span(&self) -> Option<(Timestamp, Timestamp)> {
        Some((self.tweets.first()?.time, self.tweets.last()?.time))
    }

    pub fn has_text(&self) -> bool {
        self.tweets.iter().any(|t| t.tokens.is_some())
    }
}

/// Sorts tweets by `(time, tweet_id)` and collects the user set from tweet
/// authors and graph endpoints.
pub fn build_corpus(mut tweets: Vec<Tweet>, graph: FollowGraph) -> Corpus {
    tweets.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let mut users: BTreeSet<String> = tweets.iter().map(|t| t.user_id.clone()).collect();
    users.extend(graph.nodes().into_iter().map(str::to_owned));
    Corpus {
        tweets,
        graph,
        users,
    }
}
