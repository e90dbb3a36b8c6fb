//! Seeded synthetic tweet streams with known reuse behaviour.
//!
//! Each tweet carries one hashtag picked by one of three branches:
//!
//! - individual (`p_individual`): one of the author's own earlier hashtags,
//!   drawn with weight `age^(-alpha)` where `age` is the time since the author
//!   last used it;
//! - social (`p_social`): a hashtag some followee used earlier, weighted the
//!   same way by the age of the most recent followee use;
//! - fresh (the rest): a Zipf(`zipf_s`) draw from the vocabulary.
//!
//! A branch with no history to draw from falls back to a fresh draw; those
//! fallbacks are counted in [`GenStats`]. Tweet text is the topical word of the
//! chosen hashtag plus one Zipf-drawn noise word.
//!
//! All randomness comes from a single `ChaCha8Rng` seeded with `seed`, so a
//! given config always produces the same corpus.

use crate::corpus::{FollowGraph, Timestamp, Tweet};
use crate::{Error, Result};
use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Zipf};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

pub const RNG_NAME: &str = "ChaCha8Rng";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub n_users: usize,
    pub n_tweets: usize,
    /// Probability of each ordered user pair being a follow edge.
    pub follow_prob: f64,
    pub p_individual: f64,
    pub p_social: f64,
    /// Recency-bias exponent for reuse draws.
    pub alpha: f64,
    /// Zipf exponent of global hashtag popularity.
    pub zipf_s: f64,
    pub vocab_size: u64,
    pub seed: u64,
    pub start_time: u64,
    /// Mean seconds between consecutive tweets (exponential inter-arrival).
    pub mean_gap: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            n_users: 600,
            n_tweets: 100_000,
            follow_prob: 0.02,
            p_individual: 0.45,
            p_social: 0.22,
            alpha: 1.0,
            zipf_s: 0.5,
            vocab_size: 1_000_000,
            seed: 42,
            start_time: 1_500_000_000,
            mean_gap: 60.0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        let prob = |name: &str, v: f64, bad: &mut Vec<String>| {
            if !(0.0..=1.0).contains(&v) {
                bad.push(format!("{name} must be in [0, 1] (got {v})"));
            }
        };
        prob("follow_prob", self.follow_prob, &mut bad);
        prob("p_individual", self.p_individual, &mut bad);
        prob("p_social", self.p_social, &mut bad);
        if self.p_individual + self.p_social > 1.0 + 1e-12 {
            bad.push(format!(
                "p_individual + p_social must be <= 1 (got {})",
                self.p_individual + self.p_social
            ));
        }
        if self.n_users < 1 {
            bad.push("n_users must be >= 1".into());
        }
        if self.p_social > 0.0 && self.n_users < 2 {
            bad.push("n_users must be >= 2 when p_social > 0".into());
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            bad.push(format!("alpha must be > 0 (got {})", self.alpha));
        }
        if !(self.zipf_s.is_finite() && self.zipf_s >= 0.0) {
            bad.push(format!("zipf_s must be >= 0 (got {})", self.zipf_s));
        }
        if self.vocab_size < 1 {
            bad.push("vocab_size must be >= 1".into());
        }
        if !(self.mean_gap.is_finite() && self.mean_gap > 0.0) {
            bad.push(format!("mean_gap must be > 0 (got {})", self.mean_gap));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(bad))
        }
    }
}

/// How often each branch was chosen and how often it had to fall back.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenStats {
    pub individual: usize,
    pub social: usize,
    pub fresh: usize,
    pub individual_fallbacks: usize,
    pub social_fallbacks: usize,
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub config: GenConfig,
    pub tweets: Vec<Tweet>,
    pub graph: FollowGraph,
    pub stats: GenStats,
}

#[derive(Clone, Copy)]
enum Branch {
    Individual,
    Social,
    Fresh,
}

fn hashtag_name(rank: u64) -> String {
    format!("h{rank}")
}

fn topic_word(rank: u64) -> String {
    format!("w{rank}")
}

/// Draws from `pool` (hashtag rank → last use time) with weight
/// `max(now - last, 1)^(-alpha)`.
fn recency_draw<R: Rng>(rng: &mut R, pool: &BTreeMap<u64, u64>, now: u64, alpha: f64) -> Option<u64> {
    if pool.is_empty() {
        return None;
    }
    let weights = pool
        .values()
        .map(|&last| (now.saturating_sub(last).max(1) as f64).powf(-alpha));
    let dist = WeightedIndex::new(weights).ok()?;
    pool.keys().nth(dist.sample(rng)).copied()
}

pub fn generate(config: &GenConfig) -> Result<SynthCorpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let width = config.n_users.saturating_sub(1).to_string().len();
    let users: Vec<String> = (0..config.n_users).map(|i| format!("u{i:0width$}")).collect();

    let mut graph = FollowGraph::new();
    let mut followees: Vec<Vec<usize>> = vec![Vec::new(); config.n_users];
    for (i, out) in followees.iter_mut().enumerate() {
        for j in 0..config.n_users {
            if i != j && rng.random::<f64>() < config.follow_prob {
                graph.add_edge(&users[i], &users[j]);
                out.push(j);
            }
        }
    }

    let zipf = Zipf::new(config.vocab_size as f64, config.zipf_s)
        .map_err(|e| Error::InvalidConfig(vec![format!("zipf: {e}")]))?;
    let gaps = Exp::new(1.0 / config.mean_gap)
        .map_err(|e| Error::InvalidConfig(vec![format!("mean_gap: {e}")]))?;
    let fresh = |rng: &mut ChaCha8Rng| zipf.sample(rng) as u64;

    let mut last_use: Vec<BTreeMap<u64, u64>> = vec![BTreeMap::new(); config.n_users];
    let mut stats = GenStats::default();
    let mut tweets = Vec::with_capacity(config.n_tweets);
    let id_width = config.n_tweets.saturating_sub(1).to_string().len();
    let mut clock = 0.0f64;

    for n in 0..config.n_tweets {
        clock += gaps.sample(&mut rng);
        let now = config.start_time + clock.floor() as u64;
        let author = rng.random_range(0..config.n_users);

        let roll = rng.random::<f64>();
        let branch = if roll < config.p_individual {
            Branch::Individual
        } else if roll < config.p_individual + config.p_social {
            Branch::Social
        } else {
            Branch::Fresh
        };

        let picked = match branch {
            Branch::Individual => {
                let r = recency_draw(&mut rng, &last_use[author], now, config.alpha);
                if r.is_none() {
                    stats.individual_fallbacks += 1;
                } else {
                    stats.individual += 1;
                }
                r
            }
            Branch::Social => {
                let mut pool: BTreeMap<u64, u64> = BTreeMap::new();
                for &f in &followees[author] {
                    for (&tag, &t) in &last_use[f] {
                        let slot = pool.entry(tag).or_insert(t);
                        *slot = (*slot).max(t);
                    }
                }
                let r = recency_draw(&mut rng, &pool, now, config.alpha);
                if r.is_none() {
                    stats.social_fallbacks += 1;
                } else {
                    stats.social += 1;
                }
                r
            }
            Branch::Fresh => {
                stats.fresh += 1;
                None
            }
        };
        let tag = match picked {
            Some(tag) => tag,
            None => fresh(&mut rng),
        };
        let noise = fresh(&mut rng);
        last_use[author].insert(tag, now);

        tweets.push(Tweet {
            tweet_id: format!("t{n:0id_width$}"),
            user_id: users[author].clone(),
            time: Timestamp(now),
            hashtags: [hashtag_name(tag)].into(),
            tokens: Some(vec![topic_word(tag), topic_word(noise)]),
        });
    }

    Ok(SynthCorpus {
        config: config.clone(),
        tweets,
        graph,
        stats,
    })
}

impl SynthCorpus {
    pub fn write_tweets<W: Write>(&self, out: W) -> Result<()> {
        crate::corpus::write_tweets(out, &self.tweets)
    }

    /// Follow edges as TSV, preceded by a comment naming the generator.
    pub fn write_follows<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# synthetic follow graph; rng={RNG_NAME} seed={} n_users={} follow_prob={}",
            self.config.seed, self.config.n_users, self.config.follow_prob
        )?;
        crate::corpus::write_follows(out, &self.graph)
    }
}
