use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// One ranked hashtag candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scored {
    pub hashtag: String,
    pub score: f64,
}

/// Hashtags ordered by descending score, ties broken by ascending hashtag.
///
/// Scores are always finite and each hashtag appears at most once.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScoredList(Vec<Scored>);

fn rank_order(a: &Scored, b: &Scored) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.hashtag.cmp(&b.hashtag))
}

impl ScoredList {
    /// Rank `(hashtag, score)` pairs and keep the best `k`.
    ///
    /// Non-finite scores are dropped; if a hashtag occurs more than once only
    /// its best entry survives.
    pub fn top_k<I, S>(scores: I, k: usize) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut items: Vec<Scored> = scores
            .into_iter()
            .filter(|(_, s)| s.is_finite())
            .map(|(h, score)| Scored {
                hashtag: h.into(),
                // -0.0 and 0.0 must not order differently
                score: if score == 0.0 { 0.0 } else { score },
            })
            .collect();
        items.sort_by(rank_order);
        let mut seen = std::collections::HashSet::new();
        items.retain(|s| seen.insert(s.hashtag.clone()));
        items.truncate(k);
        ScoredList(items)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scored> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Scored] {
        &self.0
    }

    pub fn hashtags(&self) -> Vec<&str> {
        self.0.iter().map(|s| s.hashtag.as_str()).collect()
    }

    pub fn into_vec(self) -> Vec<Scored> {
        self.0
    }
}

impl<'a> IntoIterator for &'a ScoredList {
    type Item = &'a Scored;
    type IntoIter = std::slice::Iter<'a, Scored>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_break_lexicographically() {
        let list = ScoredList::top_k([("zebra", 1.0), ("apple", 1.0), ("mid", 2.0)], 10);
        assert_eq!(list.hashtags(), vec!["mid", "apple", "zebra"]);
    }

    #[test]
    fn drops_non_finite_and_duplicates() {
        let list = ScoredList::top_k(
            [("a", f64::NAN), ("b", f64::INFINITY), ("c", 0.5), ("c", 0.7)],
            10,
        );
        assert_eq!(list.len(), 1);
        assert_eq!(list.as_slice()[0].score, 0.7);
    }

    #[test]
    fn truncates_to_k() {
        let list = ScoredList::top_k([("a", 3.0), ("b", 2.0), ("c", 1.0)], 2);
        assert_eq!(list.hashtags(), vec!["a", "b"]);
        assert!(ScoredList::top_k(Vec::<(String, f64)>::new(), 5).is_empty());
    }
}
