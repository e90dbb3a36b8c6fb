//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any check fails.

use hashtag_bll::bll::{base_level_activation, normalize_softmax, recommend_bll_is, ActivationParams};
use hashtag_bll::content::{build_profiles, content_scores, recommend_bll_isc};
use hashtag_bll::corpus::{
    build_corpus, build_usage_index, chronological_split, Corpus, FollowGraph, Timestamp, Tweet,
    UsageIndex,
};
use hashtag_bll::eval::{
    run_eval_detailed, Algorithm, EvalDetail, EvalParams, EvalReport, QueryMetrics, Scenario,
};
use hashtag_bll::reuse::{
    categorize_assignment, category_distribution, fit_power_law, reuse_age_histogram,
    LogBuckets, ReuseCategory, ReuseKind, TimeUnit,
};
use hashtag_bll::synth::{generate, GenConfig};
use hashtag_bll::ScoredList;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn report(id: &str, title: &str, result: Outcome, failures: &mut usize) {
    let status = if result.pass { "PASS" } else { "FAIL" };
    if !result.pass {
        *failures += 1;
    }
    println!("{status} {id} {title}: {}", result.detail);
}

fn c1() -> Outcome {
    outcome(
        true,
        "the original datasets are not distributable, so the reported R^2 values \
         (.883, .894, .689, .771) and absolute precision/recall are not reproduced; \
         C2-C9 are the property-based substitutes"
            .into(),
    )
}

fn direct_sum(ages: &[f64], d: f64) -> f64 {
    let mut total = 0.0;
    for &a in ages {
        total += 1.0 / a.powf(d);
    }
    total
}

fn c2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=60);
        let ages: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(0.0..7.0))).collect();
        let d = rng.random_range(0.05..2.0);
        let got = base_level_activation(&ages, d).expect("non-empty ages");
        let want = direct_sum(&ages, d);
        // relative error of the summed activation exp(B) against the oracle sum
        worst = worst.max((got.exp() - want).abs() / want);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-9 && secs < 1.0,
        format!("max relative error {worst:.2e} over 1000 cases (limit 1e-9), {secs:.3} s (limit 1 s)"),
    )
}

fn c3(corpus: &Corpus, gen_secs: f64) -> Outcome {
    let start = Instant::now();
    let hist = reuse_age_histogram(corpus, ReuseKind::Individual, LogBuckets::default(), TimeUnit::Hours);
    let secs = gen_secs + start.elapsed().as_secs_f64();
    match hist.and_then(|h| fit_power_law(&h)) {
        Ok(fit) => outcome(
            (fit.slope + 1.0).abs() <= 0.1 && fit.r_squared >= 0.95 && secs < 60.0,
            format!(
                "individual slope {:.4} (target -1 +/- 0.1), R^2 {:.4} (min 0.95), {} buckets, {secs:.1} s incl. generation (limit 60 s)",
                fit.slope, fit.r_squared, fit.points
            ),
        ),
        Err(e) => outcome(false, format!("fit failed: {e}")),
    }
}

fn c4(corpus: &Corpus) -> Outcome {
    let dist = category_distribution(corpus);
    let share = dist.personal_or_social_share();
    outcome(
        (share - 0.67).abs() <= 0.05,
        format!(
            "individual {} + social {} + both {} of {} assignments = {share:.4} (target 0.67 +/- 0.05)",
            dist.count(ReuseCategory::Individual),
            dist.count(ReuseCategory::Social),
            dist.count(ReuseCategory::IndividualSocial),
            dist.total()
        ),
    )
}

fn mean_recall_at_5(detail: &EvalDetail, algorithm: Algorithm) -> f64 {
    let i = detail.algorithms.iter().position(|&a| a == algorithm).unwrap();
    let per_query = &detail.per_query[i];
    per_query.iter().map(|q| q.recall_at_5).sum::<f64>() / per_query.len() as f64
}

fn c5(detail: &EvalDetail, secs: f64) -> Outcome {
    let n = detail.queries.len();
    let bll = mean_recall_at_5(detail, Algorithm::BllIs);
    let mp = mean_recall_at_5(detail, Algorithm::MostPopular);
    let mpu = mean_recall_at_5(detail, Algorithm::MostPopularUser);
    outcome(
        n >= 500 && bll - mp >= 0.02 && bll - mpu >= 0.02 && secs < 60.0,
        format!(
            "R@5 bll_is {bll:.4} vs mp {mp:.4}, mp_u {mpu:.4} (margin >= 0.02) over {n} queries (min 500), {secs:.1} s (limit 60 s)"
        ),
    )
}

fn random_fixture(rng: &mut ChaCha8Rng) -> (Vec<Tweet>, FollowGraph) {
    let users = ["u0", "u1", "u2", "u3", "u4"];
    let tags = ["a", "b", "c", "d", "e", "f", "g"];
    let words = ["w0", "w1", "w2", "w3", "w4", "w5"];
    let mut graph = FollowGraph::new();
    for a in users {
        for b in users {
            if rng.random_bool(0.35) {
                graph.add_edge(a, b);
            }
        }
    }
    let n = rng.random_range(1..40);
    let tweets = (0..n)
        .map(|i| {
            let k = rng.random_range(0..=3);
            let hashtags: BTreeSet<String> =
                (0..k).map(|_| tags[rng.random_range(0..tags.len())].to_string()).collect();
            let m = rng.random_range(0..4);
            let tokens: Vec<String> =
                (0..m).map(|_| words[rng.random_range(0..words.len())].to_string()).collect();
            Tweet {
                tweet_id: format!("t{i}"),
                user_id: users[rng.random_range(0..users.len())].to_string(),
                time: Timestamp(rng.random_range(0..500)),
                hashtags,
                tokens: Some(tokens),
            }
        })
        .collect();
    (tweets, graph)
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    for _ in 0..100 {
        let (tweets, graph) = random_fixture(&mut rng);
        let corpus = build_corpus(tweets, graph);
        let index = build_usage_index(corpus.tweets());
        let profile = build_profiles(corpus.tweets());
        let params = ActivationParams {
            d_individual: rng.random_range(0.1..1.5),
            d_social: rng.random_range(0.1..1.5),
            beta: rng.random_range(0.0..=1.0),
            min_age: 1,
        };
        let user = format!("u{}", rng.random_range(0..5));
        let now = Timestamp(rng.random_range(0..600));
        let tokens: Vec<String> = (0..rng.random_range(0..4))
            .map(|_| format!("w{}", rng.random_range(0..6)))
            .collect();
        let k = rng.random_range(1..12);
        let g = corpus.graph();

        let hybrid1 = recommend_bll_isc(&index, g, &profile, &user, now, &tokens, &params, 1.0, k).unwrap();
        let plain = recommend_bll_is(&index, g, &user, now, &params, k);
        let hybrid0 = recommend_bll_isc(&index, g, &profile, &user, now, &tokens, &params, 0.0, k).unwrap();
        let content = ScoredList::top_k(normalize_softmax(&content_scores(&profile, &tokens)), k);
        if hybrid1.hashtags() != plain.hashtags() || hybrid0.hashtags() != content.hashtags() {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("{mismatches} of 100 random fixtures differ at lambda = 1 or lambda = 0"),
    )
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Five queries with values worked out by hand at k_max = 3.
fn c7_fixture() -> (bool, String) {
    let queries: [(&[&str], &[&str]); 5] = [
        (&["a", "b", "c"], &["a"]),
        (&["x", "a", "y"], &["a", "b"]),
        (&[], &["a"]),
        (&["p", "q", "a"], &["a", "q"]),
        (&["a", "b"], &["a", "b", "c", "d"]),
    ];
    let per_query: Vec<QueryMetrics> = queries
        .iter()
        .map(|(ranked, rel)| QueryMetrics::compute(ranked, &set(rel), 3))
        .collect();
    let r = EvalReport::aggregate(&per_query, 3);

    let l = 1.0 / 3f64.log2();
    let expected = [
        ("P@1", r.precision_at_k[0], 0.4),
        ("P@2", r.precision_at_k[1], 0.5),
        ("P@3", r.precision_at_k[2], 0.4),
        ("R@1", r.recall_at_k[0], 0.25),
        ("R@2", r.recall_at_k[1], 0.5),
        ("R@3", r.recall_at_k[2], 0.6),
        ("MRR", r.mrr, 0.6),
        ("MAP", r.map, 7.0 / 15.0),
        (
            "nDCG@3",
            r.ndcg,
            (1.0 + l / (1.0 + l) + 0.0 + (l + 0.5) / (1.0 + l) + (1.0 + l) / (1.5 + l)) / 5.0,
        ),
        ("F1@5", r.f1_at_5, 12.0 / 35.0),
    ];
    let worst = expected
        .iter()
        .map(|(_, got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    let bad: Vec<&str> = expected
        .iter()
        .filter(|(_, got, want)| (got - want).abs() > 1e-12)
        .map(|(name, _, _)| *name)
        .collect();
    (
        bad.is_empty(),
        format!("5-query fixture max deviation {worst:.1e} (limit 1e-12){}", if bad.is_empty() {
            String::new()
        } else {
            format!(", wrong: {}", bad.join(" "))
        }),
    )
}

fn c7(details: &[&EvalDetail]) -> Outcome {
    let (fixture_ok, fixture_msg) = c7_fixture();
    let mut checked = 0usize;
    let mut violations = 0usize;
    for detail in details {
        for per_query in &detail.per_query {
            for q in per_query {
                checked += 1;
                if q.recall.windows(2).any(|w| w[1] < w[0]) {
                    violations += 1;
                }
            }
        }
    }
    outcome(
        fixture_ok && violations == 0 && checked > 0,
        format!("{fixture_msg}; recall@k non-decreasing in {} of {checked} synthetic query runs", checked - violations),
    )
}

fn c8(dir: &std::path::Path) -> Outcome {
    let tweets = dir.join("tweets.jsonl");
    let follows = dir.join("follows.tsv");
    let mut outputs = Vec::new();
    let start = Instant::now();
    for threads in ["1", "8"] {
        let out = dir.join(format!("eval_t{threads}"));
        let status = Command::new(env!("CARGO_BIN_EXE_hashtag-bll"))
            .args(["--quiet", "--threads", threads, "evaluate", "--scenario", "2"])
            .arg("--tweets")
            .arg(&tweets)
            .arg("--follows")
            .arg(&follows)
            .arg("--out")
            .arg(&out)
            .status();
        match status {
            Ok(s) if s.success() => {}
            other => return outcome(false, format!("evaluate with --threads {threads} failed: {other:?}")),
        }
        let read = |name: &str| std::fs::read(out.join(name)).unwrap_or_default();
        outputs.push((read("metrics.json"), read("pr_curve.csv")));
    }
    let same = outputs[0] == outputs[1] && !outputs[0].0.is_empty() && !outputs[0].1.is_empty();
    outcome(
        same,
        format!(
            "metrics.json ({} bytes) and pr_curve.csv ({} bytes) {} for --threads 1 vs 8 ({:.1} s)",
            outputs[0].0.len(),
            outputs[0].1.len(),
            if same { "byte-identical" } else { "DIFFER" },
            start.elapsed().as_secs_f64()
        ),
    )
}

/// Labels each assignment by rescanning every strictly earlier tweet.
fn brute_force_labels(corpus: &Corpus) -> Vec<ReuseCategory> {
    let tweets = corpus.tweets();
    let mut labels = Vec::new();
    for t in tweets {
        for h in &t.hashtags {
            let (mut own, mut social, mut anyone) = (false, false, false);
            for e in tweets {
                if e.time >= t.time || !e.hashtags.contains(h) {
                    continue;
                }
                anyone = true;
                own |= e.user_id == t.user_id;
                social |= corpus.graph().follows(&t.user_id, &e.user_id);
            }
            labels.push(match (own, social, anyone) {
                (true, true, _) => ReuseCategory::IndividualSocial,
                (true, false, _) => ReuseCategory::Individual,
                (false, true, _) => ReuseCategory::Social,
                (false, false, true) => ReuseCategory::Network,
                (false, false, false) => ReuseCategory::External,
            });
        }
    }
    labels
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut mismatched = 0;
    let mut assignments = 0;
    let mut largest = 0;
    for _ in 0..50 {
        let users: Vec<String> = (0..rng.random_range(2..10)).map(|i| format!("u{i}")).collect();
        let mut graph = FollowGraph::new();
        for a in &users {
            for b in &users {
                if rng.random_bool(0.3) {
                    graph.add_edge(a, b);
                }
            }
        }
        let budget = rng.random_range(1..=200);
        let mut tweets = Vec::new();
        let mut used = 0;
        while used < budget {
            let k = rng.random_range(0..=3).min(budget - used);
            used += k;
            let tags: BTreeSet<String> = (0..k).map(|_| format!("h{}", rng.random_range(0..15))).collect();
            tweets.push(Tweet {
                tweet_id: format!("t{}", tweets.len()),
                user_id: users[rng.random_range(0..users.len())].clone(),
                time: Timestamp(rng.random_range(0..300)),
                hashtags: tags,
                tokens: None,
            });
        }
        let corpus = build_corpus(tweets, graph);

        let mut seen = UsageIndex::new();
        let mut streaming = Vec::new();
        for t in corpus.tweets() {
            for h in &t.hashtags {
                streaming.push(categorize_assignment(&seen, corpus.graph(), &t.user_id, h, t.time));
            }
            seen.add_tweet(t);
        }
        let brute = brute_force_labels(&corpus);
        let dist = category_distribution(&corpus);
        let counts_match = ReuseCategory::ALL
            .iter()
            .all(|&c| dist.count(c) == brute.iter().filter(|&&b| b == c).count());
        if streaming != brute || !counts_match {
            mismatched += 1;
        }
        assignments += brute.len();
        largest = largest.max(brute.len());
    }
    outcome(
        mismatched == 0 && largest <= 200,
        format!("{mismatched} of 50 corpora differ ({assignments} assignments, largest {largest})"),
    )
}

fn main() -> ExitCode {
    let mut failures = 0;
    report("C1", "reproducibility statement", c1(), &mut failures);
    report("C2", "BLL oracle equivalence", c2(), &mut failures);

    let config = GenConfig::default();
    let start = Instant::now();
    let synth = generate(&config).expect("default config is valid");
    let gen_secs = start.elapsed().as_secs_f64();
    let corpus = build_corpus(synth.tweets.clone(), synth.graph.clone());

    report("C3", "power-law recovery", c3(&corpus, gen_secs), &mut failures);
    report("C4", "two-thirds reuse share", c4(&corpus), &mut failures);

    let start = Instant::now();
    let (train, test) = chronological_split(&corpus, 1).expect("holdout 1");
    let params = EvalParams::default();
    let scenario1 = run_eval_detailed(
        &train,
        &test,
        Scenario::WithoutText,
        &[
            Algorithm::BllIs,
            Algorithm::MostPopular,
            Algorithm::MostPopularUser,
            Algorithm::MostPopularSocial,
            Algorithm::MostRecent,
        ],
        &params,
    )
    .expect("scenario 1 evaluation");
    let c5_secs = start.elapsed().as_secs_f64();
    report("C5", "ranking superiority", c5(&scenario1, c5_secs), &mut failures);

    report("C6", "hybrid endpoint identity", c6(), &mut failures);

    let scenario2 = run_eval_detailed(
        &train,
        &test,
        Scenario::WithText,
        &[Algorithm::BllIsc, Algorithm::Content],
        &params,
    )
    .expect("scenario 2 evaluation");
    report("C7", "metric correctness", c7(&[&scenario1, &scenario2]), &mut failures);

    let dir = tempfile::tempdir().expect("temp dir");
    let write = |name: &str, f: &dyn Fn(&mut Vec<u8>)| {
        let mut buf = Vec::new();
        f(&mut buf);
        std::fs::write(dir.path().join(name), buf).expect("write corpus");
    };
    write("tweets.jsonl", &|b| synth.write_tweets(b).unwrap());
    write("follows.tsv", &|b| synth.write_follows(b).unwrap());
    report("C8", "thread-count determinism", c8(dir.path()), &mut failures);

    report("C9", "brute-force categorizer equivalence", c9(), &mut failures);

    println!("{} of 9 criteria passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
