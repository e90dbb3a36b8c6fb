//! Offline leave-latest-out evaluation.
//!
//! Each held-out tweet is one query: the recommender sees the training
//! corpus, the author and the tweet's timestamp (and, in scenario 2, its
//! tokens) and must predict its hashtags. Metrics are averaged over queries
//! with equal weight.

pub mod metrics;

use crate::baselines::{most_recent, mp_global, mp_social, mp_user};
use crate::bll::{normalize_softmax, recommend_bll_is, ActivationParams};
use crate::content::{build_profiles, content_scores, recommend_bll_isc, TokenHashtagProfile, DEFAULT_LAMBDA};
use crate::corpus::{build_usage_index, Corpus, Tweet, UsageIndex};
use crate::{Error, Result, ScoredList};
use metrics::{average_precision, f1, ndcg_at_k, precision_at_k, recall_at_k, reciprocal_rank};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_K_MAX: usize = 10;
const F1_K: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    /// Individual + social BLL.
    #[serde(rename = "bll_is")]
    BllIs,
    /// BLL_I,S mixed with content scores.
    #[serde(rename = "bll_isc")]
    BllIsc,
    /// Global popularity.
    #[serde(rename = "mp")]
    MostPopular,
    #[serde(rename = "mp_u")]
    MostPopularUser,
    #[serde(rename = "mp_s")]
    MostPopularSocial,
    #[serde(rename = "mr")]
    MostRecent,
    /// Content scores alone.
    #[serde(rename = "cb")]
    Content,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::BllIs,
        Algorithm::BllIsc,
        Algorithm::MostPopular,
        Algorithm::MostPopularUser,
        Algorithm::MostPopularSocial,
        Algorithm::MostRecent,
        Algorithm::Content,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::BllIs => "bll_is",
            Algorithm::BllIsc => "bll_isc",
            Algorithm::MostPopular => "mp",
            Algorithm::MostPopularUser => "mp_u",
            Algorithm::MostPopularSocial => "mp_s",
            Algorithm::MostRecent => "mr",
            Algorithm::Content => "cb",
        }
    }

    /// Parses a comma-separated list such as `bll_is,mp,mr`.
    pub fn parse_list(s: &str) -> Result<Vec<Algorithm>> {
        let mut out: Vec<Algorithm> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let a: Algorithm = part.parse()?;
            if !out.contains(&a) {
                out.push(a);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParam("no algorithms selected".into()));
        }
        Ok(out)
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.as_str()).collect();
                Error::InvalidParam(format!(
                    "unknown algorithm {s:?} (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 1: recommend without the tweet text. 2: the tweet's tokens are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    WithoutText,
    WithText,
}

impl Scenario {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Scenario::WithoutText),
            2 => Ok(Scenario::WithText),
            other => Err(Error::InvalidParam(format!("scenario must be 1 or 2 (got {other})"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Scenario::WithoutText => 1,
            Scenario::WithText => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalParams {
    pub activation: ActivationParams,
    pub lambda: f64,
    pub k_max: usize,
}

impl Default for EvalParams {
    fn default() -> Self {
        Self {
            activation: ActivationParams::default(),
            lambda: DEFAULT_LAMBDA,
            k_max: DEFAULT_K_MAX,
        }
    }
}

impl EvalParams {
    pub fn validate(&self) -> Result<()> {
        self.activation.validate()?;
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::InvalidParam(format!(
                "lambda must be in [0, 1] (got {})",
                self.lambda
            )));
        }
        if self.k_max < 1 {
            return Err(Error::InvalidParam("k_max must be >= 1".into()));
        }
        Ok(())
    }
}

/// Everything a recommender may look at, built from the training split only.
pub struct TrainingState<'a> {
    pub corpus: &'a Corpus,
    pub index: UsageIndex,
    pub profile: TokenHashtagProfile,
}

impl<'a> TrainingState<'a> {
    pub fn new(train: &'a Corpus) -> Self {
        Self {
            corpus: train,
            index: build_usage_index(train.tweets()),
            profile: build_profiles(train.tweets()),
        }
    }

    /// Runs `algorithm` for `query`. `tokens` is empty in scenario 1.
    pub fn recommend(
        &self,
        algorithm: Algorithm,
        query: &Tweet,
        tokens: &[String],
        params: &EvalParams,
        k: usize,
    ) -> Result<ScoredList> {
        let (index, graph) = (&self.index, self.corpus.graph());
        let (user, now) = (query.user_id.as_str(), query.time);
        Ok(match algorithm {
            Algorithm::BllIs => recommend_bll_is(index, graph, user, now, &params.activation, k),
            Algorithm::BllIsc => recommend_bll_isc(
                index,
                graph,
                &self.profile,
                user,
                now,
                tokens,
                &params.activation,
                params.lambda,
                k,
            )?,
            Algorithm::MostPopular => mp_global(index, now, k),
            Algorithm::MostPopularUser => mp_user(index, user, now, k),
            Algorithm::MostPopularSocial => mp_social(index, graph, user, now, k),
            Algorithm::MostRecent => most_recent(index, user, now, k),
            Algorithm::Content => {
                ScoredList::top_k(normalize_softmax(&content_scores(&self.profile, tokens)), k)
            }
        })
    }
}

/// Metrics of one algorithm on one query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryMetrics {
    /// Index `k - 1` holds precision@k.
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub precision_at_5: f64,
    pub recall_at_5: f64,
    pub reciprocal_rank: f64,
    pub average_precision: f64,
    pub ndcg: f64,
}

impl QueryMetrics {
    pub fn compute<S: AsRef<str>>(
        ranked: &[S],
        relevant: &std::collections::BTreeSet<String>,
        k_max: usize,
    ) -> Self {
        let top = &ranked[..ranked.len().min(k_max)];
        Self {
            precision: (1..=k_max).map(|k| precision_at_k(ranked, relevant, k)).collect(),
            recall: (1..=k_max).map(|k| recall_at_k(ranked, relevant, k)).collect(),
            precision_at_5: precision_at_k(ranked, relevant, F1_K),
            recall_at_5: recall_at_k(ranked, relevant, F1_K),
            reciprocal_rank: reciprocal_rank(top, relevant),
            average_precision: average_precision(ranked, relevant, k_max),
            ndcg: ndcg_at_k(ranked, relevant, k_max),
        }
    }
}

/// Query-averaged metrics of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n_test_queries: usize,
    pub k_max: usize,
    pub precision_at_k: Vec<f64>,
    pub recall_at_k: Vec<f64>,
    /// Harmonic mean of mean precision@5 and mean recall@5.
    pub f1_at_5: f64,
    pub mrr: f64,
    pub map: f64,
    pub ndcg: f64,
}

impl EvalReport {
    /// Averages per-query metrics, summing in the given order.
    pub fn aggregate(per_query: &[QueryMetrics], k_max: usize) -> Self {
        let n = per_query.len();
        let mean = |f: &dyn Fn(&QueryMetrics) -> f64| {
            if n == 0 {
                0.0
            } else {
                per_query.iter().map(f).fold(0.0, |acc, v| acc + v) / n as f64
            }
        };
        let precision_at_k: Vec<f64> = (0..k_max).map(|i| mean(&|q| q.precision[i])).collect();
        let recall_at_k: Vec<f64> = (0..k_max).map(|i| mean(&|q| q.recall[i])).collect();
        Self {
            n_test_queries: n,
            k_max,
            f1_at_5: f1(mean(&|q| q.precision_at_5), mean(&|q| q.recall_at_5)),
            mrr: mean(&|q| q.reciprocal_rank),
            map: mean(&|q| q.average_precision),
            ndcg: mean(&|q| q.ndcg),
            precision_at_k,
            recall_at_k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrPoint {
    pub k: usize,
    pub precision: f64,
    pub recall: f64,
}

/// One `(k, precision, recall)` row per `k` in `1..=k_max`.
pub fn pr_curve(report: &EvalReport) -> Vec<PrPoint> {
    (1..=report.k_max)
        .map(|k| PrPoint {
            k,
            precision: report.precision_at_k[k - 1],
            recall: report.recall_at_k[k - 1],
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmReport {
    pub algorithm: Algorithm,
    #[serde(flatten)]
    pub report: EvalReport,
}

/// Per-algorithm, per-query metrics. `per_query[a][q]` belongs to
/// `algorithms[a]` and the `q`-th query in `(time, tweet_id)` order.
#[derive(Debug, Clone)]
pub struct EvalDetail {
    pub algorithms: Vec<Algorithm>,
    pub queries: Vec<Tweet>,
    pub per_query: Vec<Vec<QueryMetrics>>,
}

fn check_inputs(train: &Corpus, test: &[Tweet], scenario: Scenario, params: &EvalParams) -> Result<()> {
    params.validate()?;
    if test.is_empty() {
        return Err(Error::InsufficientData("no test queries".into()));
    }
    if let Some(t) = test.iter().find(|t| !t.has_hashtags()) {
        return Err(Error::InvalidParam(format!(
            "test tweet {} has no hashtags",
            t.tweet_id
        )));
    }
    let train_ids: std::collections::HashSet<&str> =
        train.tweets().iter().map(|t| t.tweet_id.as_str()).collect();
    if let Some(t) = test.iter().find(|t| train_ids.contains(t.tweet_id.as_str())) {
        return Err(Error::InvalidParam(format!(
            "test tweet {} also appears in the training split",
            t.tweet_id
        )));
    }
    if scenario == Scenario::WithText
        && !train.has_text()
        && test.iter().all(|t| t.tokens.is_none())
    {
        return Err(Error::InsufficientData(
            "scenario 2 needs tweet text, but no tweet has any".into(),
        ));
    }
    Ok(())
}

/// Runs every algorithm on every query and keeps the per-query metrics.
pub fn run_eval_detailed(
    train: &Corpus,
    test: &[Tweet],
    scenario: Scenario,
    algorithms: &[Algorithm],
    params: &EvalParams,
) -> Result<EvalDetail> {
    check_inputs(train, test, scenario, params)?;
    let state = TrainingState::new(train);

    let mut queries = test.to_vec();
    queries.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let depth = params.k_max.max(F1_K);
    let no_tokens: Vec<String> = Vec::new();

    let per_query = algorithms
        .iter()
        .map(|&algorithm| {
            queries
                .par_iter()
                .map(|q| {
                    let tokens = match scenario {
                        Scenario::WithText => q.tokens.as_deref().unwrap_or(&no_tokens),
                        Scenario::WithoutText => &no_tokens,
                    };
                    let list = state.recommend(algorithm, q, tokens, params, depth)?;
                    Ok(QueryMetrics::compute(&list.hashtags(), &q.hashtags, params.k_max))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(EvalDetail {
        algorithms: algorithms.to_vec(),
        queries,
        per_query,
    })
}

/// Query-averaged report for each algorithm, in the order given.
pub fn run_eval(
    train: &Corpus,
    test: &[Tweet],
    scenario: Scenario,
    algorithms: &[Algorithm],
    params: &EvalParams,
) -> Result<Vec<AlgorithmReport>> {
    let detail = run_eval_detailed(train, test, scenario, algorithms, params)?;
    Ok(detail
        .algorithms
        .iter()
        .zip(&detail.per_query)
        .map(|(&algorithm, per_query)| AlgorithmReport {
            algorithm,
            report: EvalReport::aggregate(per_query, params.k_max),
        })
        .collect())
}
