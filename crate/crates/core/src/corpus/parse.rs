//! Line-oriented readers and writers for the tweet stream (JSON Lines) and
//! the follow graph (TSV).

use super::{FollowGraph, Timestamp, Tweet};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use std::io::{BufRead, Write};

#[derive(Deserialize)]
struct RawTweet {
    tweet_id: String,
    user_id: String,
    timestamp: u64,
    hashtags: Vec<String>,
    #[serde(default)]
    text: Option<String>,
}

#[derive(Serialize)]
struct CanonicalTweet<'a> {
    tweet_id: &'a str,
    user_id: &'a str,
    timestamp: u64,
    hashtags: Vec<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    text: Option<String>,
}

/// Lowercases and strips leading '#'. Returns `None` if nothing is left.
pub fn normalize_hashtag(raw: &str) -> Option<String> {
    let tag = raw.trim().trim_start_matches('#').to_lowercase();
    (!tag.is_empty()).then_some(tag)
}

/// Lowercase alphanumeric runs of at least two characters. Runs that start
/// right after a '#' are hashtags and are skipped.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut hashtag = false;
    let mut prev = None;

    let mut flush = |current: &mut String, hashtag: bool| {
        if !hashtag && current.chars().count() >= 2 {
            tokens.push(std::mem::take(current));
        } else {
            current.clear();
        }
    };

    for c in text.chars() {
        if c.is_alphanumeric() {
            if current.is_empty() {
                hashtag = prev == Some('#');
            }
            current.extend(c.to_lowercase());
        } else if !current.is_empty() {
            flush(&mut current, hashtag);
        }
        prev = Some(c);
    }
    if !current.is_empty() {
        flush(&mut current, hashtag);
    }
    tokens
}

/// Reads one tweet per line. Blank lines are skipped; line numbers in errors
/// are 1-based and count every physical line.
pub fn parse_tweets<R: BufRead>(reader: R) -> Result<Vec<Tweet>> {
    let mut tweets = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawTweet = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if raw.tweet_id.is_empty() || raw.user_id.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "tweet_id and user_id must be non-empty".into(),
            });
        }
        if !ids.insert(raw.tweet_id.clone()) {
            return Err(Error::DuplicateTweet {
                line: line_no,
                id: raw.tweet_id,
            });
        }
        let hashtags: BTreeSet<String> = raw
            .hashtags
            .iter()
            .filter_map(|h| normalize_hashtag(h))
            .collect();
        tweets.push(Tweet {
            tweet_id: raw.tweet_id,
            user_id: raw.user_id,
            time: Timestamp(raw.timestamp),
            hashtags,
            tokens: raw.text.as_deref().map(tokenize),
        });
    }
    Ok(tweets)
}

/// Writes tweets in the canonical JSON Lines form. Tokens are written back as
/// space-joined `text`, which re-tokenizes to the same list.
pub fn write_tweets<'a, W, I>(mut out: W, tweets: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a Tweet>,
{
    for t in tweets {
        let record = CanonicalTweet {
            tweet_id: &t.tweet_id,
            user_id: &t.user_id,
            timestamp: t.time.0,
            hashtags: t.hashtags.iter().map(String::as_str).collect(),
            text: t.tokens.as_ref().map(|tok| tok.join(" ")),
        };
        serde_json::to_writer(&mut out, &record).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// A parsed follow graph plus the number of self-loop lines that were dropped.
#[derive(Debug, Clone, Default)]
pub struct FollowParse {
    pub graph: FollowGraph,
    pub self_loops: usize,
}

pub fn parse_follows<R: BufRead>(reader: R) -> Result<FollowParse> {
    let mut parsed = FollowParse::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            [a, b] if !a.is_empty() && !b.is_empty() => {
                if !parsed.graph.add_edge(a, b) {
                    parsed.self_loops += 1;
                }
            }
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!(
                        "expected \"follower<TAB>followee\", got {} field(s)",
                        fields.len()
                    ),
                })
            }
        }
    }
    Ok(parsed)
}

pub fn write_follows<W: Write>(mut out: W, graph: &FollowGraph) -> Result<()> {
    for (a, b) in graph.edges() {
        writeln!(out, "{a}\t{b}")?;
    }
    Ok(())
}
