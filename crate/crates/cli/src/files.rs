//! Input loading and atomic output.

use anyhow::{Context, Result};
use hashtag_bll::corpus::{build_corpus, parse_follows, parse_tweets, Corpus, FollowGraph};
use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

pub struct CorpusInput<'a> {
    pub tweets: &'a Path,
    pub follows: Option<&'a Path>,
    pub stopwords: Option<&'a Path>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

/// One word per line; blank lines and '#' comments are ignored. Words are
/// lowercased to match the tokenizer.
pub fn read_stopwords(path: &Path) -> Result<HashSet<String>> {
    let mut words = HashSet::new();
    for line in open(path)?.lines() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        let word = line.trim();
        if !word.is_empty() && !word.starts_with('#') {
            words.insert(word.to_lowercase());
        }
    }
    Ok(words)
}

pub fn load_corpus(input: &CorpusInput) -> Result<Corpus> {
    let mut tweets =
        parse_tweets(open(input.tweets)?).with_context(|| format!("{}", input.tweets.display()))?;
    let graph = match input.follows {
        Some(path) => {
            let parsed = parse_follows(open(path)?).with_context(|| format!("{}", path.display()))?;
            if parsed.self_loops > 0 {
                log::warn!("{}: dropped {} self-follow line(s)", path.display(), parsed.self_loops);
            }
            parsed.graph
        }
        None => FollowGraph::new(),
    };
    if let Some(path) = input.stopwords {
        let stop = read_stopwords(path)?;
        for t in &mut tweets {
            if let Some(tokens) = &mut t.tokens {
                tokens.retain(|w| !stop.contains(w));
            }
        }
    }
    let corpus = build_corpus(tweets, graph);
    log::info!(
        "loaded {} tweets, {} users, {} follow edges",
        corpus.tweets().len(),
        corpus.users().len(),
        corpus.graph().edge_count()
    );
    Ok(corpus)
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .with_context(|| format!("cannot create a temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(())
}
