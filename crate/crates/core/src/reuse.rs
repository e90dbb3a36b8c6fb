//! Where do hashtags come from, and how old is the use being repeated?
//!
//! Every (tweet, hashtag) assignment is labelled by who used the hashtag
//! strictly earlier: the author, someone the author follows, both, someone
//! else in the dataset, or nobody. Reuse ages (time since the most recent
//! qualifying earlier use) are binned on a log scale and fitted with a line in
//! log-log space. The fitted quantity is reuse density per unit age, corrected
//! for how much of the observation window can host a reuse of that age.

use crate::corpus::{Corpus, FollowGraph, Timestamp, UsageIndex};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReuseCategory {
    Individual,
    Social,
    IndividualSocial,
    Network,
    External,
}

impl ReuseCategory {
    pub const ALL: [ReuseCategory; 5] = [
        ReuseCategory::Individual,
        ReuseCategory::Social,
        ReuseCategory::IndividualSocial,
        ReuseCategory::Network,
        ReuseCategory::External,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReuseCategory::Individual => "individual",
            ReuseCategory::Social => "social",
            ReuseCategory::IndividualSocial => "individual_social",
            ReuseCategory::Network => "network",
            ReuseCategory::External => "external",
        }
    }

    /// Individual, social, or both.
    pub fn is_personal_or_social(self) -> bool {
        matches!(
            self,
            ReuseCategory::Individual | ReuseCategory::Social | ReuseCategory::IndividualSocial
        )
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ReuseCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Labels one assignment of `hashtag` by `user` at time `t`, looking only at
/// index events strictly before `t`.
pub fn categorize_assignment(
    index: &UsageIndex,
    graph: &FollowGraph,
    user: &str,
    hashtag: &str,
    t: Timestamp,
) -> ReuseCategory {
    let own = !index.user_uses_before(user, hashtag, t).is_empty();
    let social = graph
        .followees(user)
        .any(|f| !index.user_uses_before(f, hashtag, t).is_empty());
    match (own, social) {
        (true, true) => ReuseCategory::IndividualSocial,
        (true, false) => ReuseCategory::Individual,
        (false, true) => ReuseCategory::Social,
        (false, false) if !index.global_uses_before(hashtag, t).is_empty() => {
            ReuseCategory::Network
        }
        (false, false) => ReuseCategory::External,
    }
}

/// Assignment counts per category.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryDistribution {
    counts: [usize; 5],
}

impl CategoryDistribution {
    pub fn add(&mut self, category: ReuseCategory) {
        self.counts[category.slot()] += 1;
    }

    pub fn count(&self, category: ReuseCategory) -> usize {
        self.counts[category.slot()]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Fraction of all assignments; 0 for an empty distribution.
    pub fn share(&self, category: ReuseCategory) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.count(category) as f64 / n as f64,
        }
    }

    /// `(category, count, share)` rows in [`ReuseCategory::ALL`] order.
    pub fn rows(&self) -> Vec<(ReuseCategory, usize, f64)> {
        ReuseCategory::ALL
            .iter()
            .map(|&c| (c, self.count(c), self.share(c)))
            .collect()
    }

    /// Combined share of individual, social and individual/social reuse.
    pub fn personal_or_social_share(&self) -> f64 {
        ReuseCategory::ALL
            .iter()
            .filter(|c| c.is_personal_or_social())
            .map(|&c| self.share(c))
            .sum()
    }
}

/// Categorizes every assignment in chronological order against the index of
/// everything seen so far.
pub fn category_distribution(corpus: &Corpus) -> CategoryDistribution {
    let mut seen = UsageIndex::new();
    let mut dist = CategoryDistribution::default();
    for tweet in corpus.tweets() {
        for tag in &tweet.hashtags {
            dist.add(categorize_assignment(
                &seen,
                corpus.graph(),
                &tweet.user_id,
                tag,
                tweet.time,
            ));
        }
        seen.add_tweet(tweet);
    }
    dist
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    Seconds,
    Hours,
    Days,
}

impl TimeUnit {
    pub fn seconds(self) -> u64 {
        match self {
            TimeUnit::Seconds => 1,
            TimeUnit::Hours => 3_600,
            TimeUnit::Days => 86_400,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TimeUnit::Seconds => "seconds",
            TimeUnit::Hours => "hours",
            TimeUnit::Days => "days",
        }
    }
}

impl FromStr for TimeUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seconds" | "s" => Ok(TimeUnit::Seconds),
            "hours" | "h" => Ok(TimeUnit::Hours),
            "days" | "d" => Ok(TimeUnit::Days),
            other => Err(Error::InvalidParam(format!(
                "unknown time unit {other:?} (expected seconds, hours or days)"
            ))),
        }
    }
}

impl fmt::Display for TimeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReuseKind {
    /// Time since the user's own most recent earlier use.
    Individual,
    /// Time since the most recent earlier use by any followee.
    Social,
}

impl ReuseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReuseKind::Individual => "individual",
            ReuseKind::Social => "social",
        }
    }
}

pub const DEFAULT_BUCKETS_PER_DECADE: u32 = 20;

/// Log-spaced buckets aligned to the grid `10^(i / per_decade)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogBuckets {
    pub per_decade: u32,
}

impl Default for LogBuckets {
    fn default() -> Self {
        Self {
            per_decade: DEFAULT_BUCKETS_PER_DECADE,
        }
    }
}

impl LogBuckets {
    fn grid_index(&self, value: f64) -> i64 {
        (value.log10() * self.per_decade as f64).floor() as i64
    }

    fn edge(&self, i: i64) -> f64 {
        10f64.powf(i as f64 / self.per_decade as f64)
    }

    /// Edges covering `[min, max]` (both positive).
    fn edges_covering(&self, min: f64, max: f64) -> Vec<f64> {
        let lo = self.grid_index(min);
        let mut hi = self.grid_index(max) + 1;
        if self.edge(hi) <= max {
            hi += 1;
        }
        let mut lo = lo;
        if self.edge(lo) > min {
            lo -= 1;
        }
        (lo..=hi).map(|i| self.edge(i)).collect()
    }
}

/// Reuse counts per log-spaced age bucket, ages in `time_unit`.
///
/// Buckets start at one time unit; shorter reuses are tallied in
/// `below_range`. `window` is the length of the observation period in the same
/// unit: a reuse of age `a` can only be observed in the last `window - a` of
/// it, and the fit divides that exposure out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgeHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub time_unit: TimeUnit,
    pub below_range: u64,
    pub window: Option<f64>,
}

impl AgeHistogram {
    /// Bins `ages` (in `time_unit`). With nothing at or above one unit the
    /// buckets span the first decade.
    pub fn from_ages(
        ages: &[f64],
        buckets: LogBuckets,
        time_unit: TimeUnit,
        window: Option<f64>,
    ) -> Result<Self> {
        if buckets.per_decade == 0 {
            return Err(Error::InvalidParam("buckets per decade must be >= 1".into()));
        }
        if ages.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidParam("reuse ages must be positive".into()));
        }
        let max = ages.iter().copied().fold(1.0, f64::max);
        let edges = buckets.edges_covering(1.0, max);
        let last = edges.len() - 2;
        let mut counts = vec![0u64; last + 1];
        let mut below_range = 0;
        for &age in ages {
            if age < edges[0] {
                below_range += 1;
                continue;
            }
            let i = edges.partition_point(|&e| e <= age) - 1;
            counts[i.min(last)] += 1;
        }
        Ok(Self {
            edges,
            counts,
            time_unit,
            below_range,
            window,
        })
    }

    pub fn bucket_count(&self) -> usize {
        self.counts.len()
    }

    /// Reuses inside the bucketed range.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Geometric midpoint of each bucket.
    pub fn midpoints(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Reuses per unit age per unit of exposure, at each bucket midpoint.
    /// Buckets whose midpoint lies beyond the window get 0.
    pub fn densities(&self) -> Vec<f64> {
        self.counts
            .iter()
            .zip(self.widths())
            .zip(self.midpoints())
            .map(|((&c, width), mid)| {
                let exposure = match self.window {
                    Some(w) => (1.0 - mid / w).max(0.0),
                    None => 1.0,
                };
                if exposure > 0.0 {
                    c as f64 / (width * exposure)
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// Collects the age of every individual or social reuse in `corpus`, in
/// seconds.
pub fn reuse_ages(corpus: &Corpus, kind: ReuseKind) -> Vec<u64> {
    let index = crate::corpus::build_usage_index(corpus.tweets());
    let graph = corpus.graph();
    let mut ages = Vec::new();
    for tweet in corpus.tweets() {
        let t = tweet.time;
        for tag in &tweet.hashtags {
            let last = match kind {
                ReuseKind::Individual => index.user_uses_before(&tweet.user_id, tag, t).last().copied(),
                ReuseKind::Social => graph
                    .followees(&tweet.user_id)
                    .filter_map(|f| index.user_uses_before(f, tag, t).last().copied())
                    .max(),
            };
            if let Some(age) = last.and_then(|l| t.age_of(l)) {
                ages.push(age);
            }
        }
    }
    ages
}

/// Histogram of reuse ages for `kind`, with the corpus time span as the
/// observation window.
///
/// Fails when the corpus spans less than one `time_unit`.
pub fn reuse_age_histogram(
    corpus: &Corpus,
    kind: ReuseKind,
    buckets: LogBuckets,
    time_unit: TimeUnit,
) -> Result<AgeHistogram> {
    let span = corpus
        .time_span()
        .map_or(0, |(first, last)| last.seconds() - first.seconds());
    if span < time_unit.seconds() {
        return Err(Error::InvalidParam(format!(
            "time unit {time_unit} is coarser than the data span ({span} s)"
        )));
    }
    let unit = time_unit.seconds() as f64;
    let ages: Vec<f64> = reuse_ages(corpus, kind)
        .into_iter()
        .map(|a| a as f64 / unit)
        .collect();
    AgeHistogram::from_ages(&ages, buckets, time_unit, Some(span as f64 / unit))
}

/// Least-squares line through log-log points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub slope: f64,
    /// Natural-log intercept: `ln y = intercept + slope · ln x`.
    pub intercept: f64,
    pub r_squared: f64,
    /// Number of points used.
    pub points: usize,
}

/// Ordinary least squares of `ln y` on `ln x` over the points with `y > 0`.
///
/// Needs at least two such points with distinct `x`. When the `ln y` values
/// are all equal the fit is exact and `r_squared` is 1.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least 2 positive buckets, got {}",
            logs.len()
        )));
    }
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData(
            "power-law fit needs at least 2 distinct ages".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = logs.iter().map(|(_, y)| (y - mean_y).powi(2)).sum();
    let ss_res: f64 = logs
        .iter()
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(PowerLawFit {
        slope,
        intercept,
        r_squared,
        points: logs.len(),
    })
}

/// Log-log fit of [`AgeHistogram::densities`] against bucket midpoints.
/// Empty buckets are ignored.
pub fn fit_power_law(hist: &AgeHistogram) -> Result<PowerLawFit> {
    let points: Vec<(f64, f64)> = hist
        .midpoints()
        .into_iter()
        .zip(hist.densities())
        .collect();
    fit_log_log(&points)
}
