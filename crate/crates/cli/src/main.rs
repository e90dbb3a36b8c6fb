//! `hashtag-bll`: generate synthetic corpora, analyze hashtag reuse, recommend
//! and evaluate.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for data errors.

mod files;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use files::{ensure_dir, load_corpus, write_atomic, CorpusInput};
use hashtag_bll::bll::{recommend_bll_is, ActivationParams, DEFAULT_BETA, DEFAULT_DECAY};
use hashtag_bll::content::{build_profiles, recommend_bll_isc, DEFAULT_LAMBDA};
use hashtag_bll::corpus::{
    build_usage_index, chronological_split, tokenize, Timestamp, DEFAULT_HOLDOUT,
};
use hashtag_bll::eval::{pr_curve, run_eval, Algorithm, EvalParams, Scenario, DEFAULT_K_MAX};
use hashtag_bll::reuse::{
    category_distribution, fit_power_law, reuse_age_histogram, LogBuckets, ReuseKind, TimeUnit,
    DEFAULT_BUCKETS_PER_DECADE,
};
use hashtag_bll::synth::{generate, GenConfig};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hashtag-bll", version, about = "Temporal hashtag reuse analysis and recommendation")]
struct Cli {
    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Only print warnings and errors.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded synthetic corpus.
    Generate(GenerateArgs),
    /// Reuse categories and reuse-age histograms with power-law fits.
    Analyze(AnalyzeArgs),
    /// Top-k hashtags for one user at one time.
    Recommend(RecommendArgs),
    /// Offline evaluation on a per-user chronological split.
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct CorpusArgs {
    /// Tweets, one JSON object per line.
    #[arg(long)]
    tweets: PathBuf,
    /// Follow edges, "follower<TAB>followee" per line.
    #[arg(long)]
    follows: Option<PathBuf>,
}

impl CorpusArgs {
    fn input<'a>(&'a self, stopwords: Option<&'a Path>) -> CorpusInput<'a> {
        CorpusInput {
            tweets: &self.tweets,
            follows: self.follows.as_deref(),
            stopwords,
        }
    }
}

#[derive(Args)]
struct ActivationArgs {
    /// Decay exponent for the user's own history.
    #[arg(long, default_value_t = DEFAULT_DECAY)]
    d_ind: f64,
    /// Decay exponent for followees' history.
    #[arg(long, default_value_t = DEFAULT_DECAY)]
    d_soc: f64,
    /// Weight of the individual component.
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Ages below this many seconds are raised to it.
    #[arg(long, default_value_t = 1)]
    min_age: u64,
}

impl ActivationArgs {
    fn params(&self) -> ActivationParams {
        ActivationParams {
            d_individual: self.d_ind,
            d_social: self.d_soc,
            beta: self.beta,
            min_age: self.min_age,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// JSON generator config; missing fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Unit of reuse ages: seconds, hours or days.
    #[arg(long, default_value = "hours")]
    time_unit: TimeUnit,
    #[arg(long, default_value_t = DEFAULT_BUCKETS_PER_DECADE,
          value_parser = clap::value_parser!(u32).range(1..))]
    buckets_per_decade: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RecommendArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    #[arg(long)]
    user: String,
    /// Unix time in seconds; only uses strictly before it count.
    #[arg(long)]
    now: u64,
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    k: usize,
    #[command(flatten)]
    activation: ActivationArgs,
    /// Tweet text; switches to the content-aware variant.
    #[arg(long)]
    text: Option<String>,
    /// Weight of the BLL part when --text is given.
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    lambda: f64,
    /// Words to drop from tweet text, one per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// 1: without tweet text, 2: with tweet text.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    scenario: u8,
    /// Comma-separated subset of bll_is,bll_isc,mp,mp_u,mp_s,mr,cb
    /// (default: all that apply to the scenario).
    #[arg(long)]
    algorithms: Option<String>,
    /// Latest hashtag tweets per user held out for testing.
    #[arg(long, default_value_t = DEFAULT_HOLDOUT)]
    holdout: usize,
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    k_max: usize,
    #[command(flatten)]
    activation: ActivationArgs,
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    lambda: f64,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<hashtag_bll::Error> for Failure {
    fn from(e: hashtag_bll::Error) -> Self {
        Failure::Data(e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    env_logger::Builder::new()
        .filter_level(if cli.quiet {
            log::LevelFilter::Warn
        } else {
            log::LevelFilter::Info
        })
        .format_timestamp(None)
        .init();

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Recommend(args) => cmd_recommend(args),
        Command::Evaluate(args) => cmd_evaluate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn json_bytes<T: Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn cmd_generate(args: &GenerateArgs) -> CmdResult {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            serde_json::from_str::<GenConfig>(&text)
                .with_context(|| format!("{}", path.display()))?
        }
        None => GenConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let synth = generate(&config)?;
    log::info!(
        "generated {} tweets for {} users ({} follow edges)",
        synth.tweets.len(),
        config.n_users,
        synth.graph.edge_count()
    );

    ensure_dir(&args.out)?;
    let mut tweets = Vec::new();
    synth.write_tweets(&mut tweets)?;
    write_atomic(&args.out.join("tweets.jsonl"), &tweets)?;
    let mut follows = Vec::new();
    synth.write_follows(&mut follows)?;
    write_atomic(&args.out.join("follows.tsv"), &follows)?;
    write_atomic(&args.out.join("config.json"), &json_bytes(&synth.config)?)?;
    write_atomic(&args.out.join("gen_stats.json"), &json_bytes(&synth.stats)?)?;
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> CmdResult {
    let corpus = load_corpus(&args.corpus.input(None))?;
    let buckets = LogBuckets {
        per_decade: args.buckets_per_decade,
    };

    let dist = category_distribution(&corpus);
    let mut categories = String::from("category,count,share\n");
    for (category, count, share) in dist.rows() {
        writeln!(categories, "{category},{count},{share}").unwrap();
    }
    log::info!(
        "{} assignments, individual/social share {:.4}",
        dist.total(),
        dist.personal_or_social_share()
    );

    let mut outputs = vec![("categories.csv".to_string(), categories)];
    for kind in [ReuseKind::Individual, ReuseKind::Social] {
        let hist = reuse_age_histogram(&corpus, kind, buckets, args.time_unit)?;
        let mut csv = String::new();
        match fit_power_law(&hist) {
            Ok(fit) => {
                writeln!(
                    csv,
                    "# fit_slope={},fit_intercept={},r_squared={}",
                    fit.slope, fit.intercept, fit.r_squared
                )
                .unwrap();
                log::info!(
                    "{} reuse: slope {:.4}, R^2 {:.4} over {} buckets",
                    kind.as_str(),
                    fit.slope,
                    fit.r_squared,
                    fit.points
                );
            }
            Err(e) => {
                log::warn!("{} reuse: no fit ({e})", kind.as_str());
                csv.push_str("# fit_slope=nan,fit_intercept=nan,r_squared=nan\n");
            }
        }
        writeln!(
            csv,
            "# time_unit={},below_one_unit={},window={}",
            hist.time_unit,
            hist.below_range,
            hist.window.unwrap_or(f64::INFINITY)
        )
        .unwrap();
        csv.push_str("age_midpoint,count,density\n");
        for ((mid, count), density) in hist.midpoints().iter().zip(&hist.counts).zip(hist.densities()) {
            writeln!(csv, "{mid},{count},{density}").unwrap();
        }
        outputs.push((format!("decay_{}.csv", kind.as_str()), csv));
    }

    ensure_dir(&args.out)?;
    for (name, body) in outputs {
        write_atomic(&args.out.join(name), body.as_bytes())?;
    }
    Ok(())
}

fn check_k(k: usize, flag: &str) -> CmdResult {
    if k == 0 {
        return Err(usage(format!("{flag} must be >= 1")));
    }
    Ok(())
}

fn cmd_recommend(args: &RecommendArgs) -> CmdResult {
    let params = args.activation.params();
    params.validate().map_err(usage)?;
    check_k(args.k, "--k")?;
    if !(0.0..=1.0).contains(&args.lambda) {
        return Err(usage(format!("--lambda must be in [0, 1] (got {})", args.lambda)));
    }

    let corpus = load_corpus(&args.corpus.input(args.stopwords.as_deref()))?;
    let index = build_usage_index(corpus.tweets());
    let now = Timestamp(args.now);
    let list = match &args.text {
        None => recommend_bll_is(&index, corpus.graph(), &args.user, now, &params, args.k),
        Some(text) => {
            let mut tokens = tokenize(text);
            if let Some(path) = &args.stopwords {
                let stop = files::read_stopwords(path)?;
                tokens.retain(|w| !stop.contains(w));
            }
            let profile = build_profiles(corpus.tweets());
            recommend_bll_isc(
                &index,
                corpus.graph(),
                &profile,
                &args.user,
                now,
                &tokens,
                &params,
                args.lambda,
                args.k,
            )?
        }
    };
    if list.is_empty() {
        log::warn!("no candidates for user {:?} before {}", args.user, args.now);
    }

    let bytes = json_bytes(&list)?;
    match &args.out {
        Some(path) => write_atomic(path, &bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .context("writing to stdout")?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct MetricsFile<'a> {
    scenario: u8,
    holdout: usize,
    k_max: usize,
    n_train_tweets: usize,
    activation: ActivationParams,
    lambda: f64,
    results: &'a [hashtag_bll::eval::AlgorithmReport],
}

fn cmd_evaluate(args: &EvaluateArgs) -> CmdResult {
    let scenario = Scenario::from_number(args.scenario).map_err(usage)?;
    let algorithms = match &args.algorithms {
        Some(list) => Algorithm::parse_list(list).map_err(usage)?,
        None => Algorithm::ALL
            .into_iter()
            .filter(|a| {
                scenario == Scenario::WithText
                    || !matches!(a, Algorithm::BllIsc | Algorithm::Content)
            })
            .collect(),
    };
    let params = EvalParams {
        activation: args.activation.params(),
        lambda: args.lambda,
        k_max: args.k_max,
    };
    params.validate().map_err(usage)?;
    if args.holdout == 0 {
        return Err(usage("--holdout must be >= 1"));
    }

    let corpus = load_corpus(&args.corpus.input(args.stopwords.as_deref()))?;
    let (train, test) = chronological_split(&corpus, args.holdout)?;
    log::info!(
        "{} training tweets, {} test queries",
        train.tweets().len(),
        test.len()
    );
    let reports = run_eval(&train, &test, scenario, &algorithms, &params)?;
    for r in &reports {
        let k5 = 4.min(r.report.k_max - 1);
        log::info!(
            "{:8} R@{} {:.4}  MRR {:.4}  MAP {:.4}  nDCG {:.4}",
            r.algorithm.as_str(),
            k5 + 1,
            r.report.recall_at_k[k5],
            r.report.mrr,
            r.report.map,
            r.report.ndcg
        );
    }

    let metrics = MetricsFile {
        scenario: scenario.number(),
        holdout: args.holdout,
        k_max: params.k_max,
        n_train_tweets: train.tweets().len(),
        activation: params.activation,
        lambda: params.lambda,
        results: &reports,
    };
    let mut curve = String::from("algorithm,k,precision,recall\n");
    for r in &reports {
        for p in pr_curve(&r.report) {
            writeln!(curve, "{},{},{},{}", r.algorithm, p.k, p.precision, p.recall).unwrap();
        }
    }

    ensure_dir(&args.out)?;
    write_atomic(&args.out.join("metrics.json"), &json_bytes(&metrics)?)?;
    write_atomic(&args.out.join("pr_curve.csv"), curve.as_bytes())?;
    Ok(())
}
