use super::{build_corpus, Corpus, Tweet};
use crate::{Error, Result};
use std::collections::{HashMap, HashSet};

pub const DEFAULT_HOLDOUT: usize = 1;

/// Leave-latest-out split.
///
/// Each user with at least `per_user_holdout + 1` hashtag-bearing tweets gets
/// their latest `per_user_holdout` such tweets moved to the test list. Everything
/// else, including tweets without hashtags, stays in the training corpus,
/// which keeps the full follow graph. Test tweets come back in chronological
/// order.
pub fn chronological_split(corpus: &Corpus, per_user_holdout: usize) -> Result<(Corpus, Vec<Tweet>)> {
    if per_user_holdout < 1 {
        return Err(Error::InvalidParam("per_user_holdout must be >= 1".into()));
    }

    let mut by_user: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, t) in corpus.tweets().iter().enumerate() {
        if t.has_hashtags() {
            by_user.entry(t.user_id.as_str()).or_default().push(i);
        }
    }

    let held_out: HashSet<usize> = by_user
        .values()
        .filter(|idx| idx.len() > per_user_holdout)
        .flat_map(|idx| idx[idx.len() - per_user_holdout..].iter().copied())
        .collect();

    let mut train = Vec::with_capacity(corpus.tweets().len() - held_out.len());
    let mut test = Vec::with_capacity(held_out.len());
    for (i, t) in corpus.tweets().iter().enumerate() {
        if held_out.contains(&i) {
            test.push(t.clone());
        } else {
            train.push(t.clone());
        }
    }
    Ok((build_corpus(train, corpus.graph().clone()), test))
}
