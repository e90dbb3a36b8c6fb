//! Hashtag recommendation with ACT-R base-level learning (BLL).
//!
//! The activation of a hashtag for a user is the log of its power-law decayed
//! past uses:
//!
//! ```text
//! B(h) = ln( Σ_j age_j^(-d) )
//! ```
//!
//! computed separately over the user's own uses (individual) and over the
//! pooled uses of everyone the user follows (social). Both activations are
//! softmax-normalized and mixed with weight `beta`; the hybrid variant adds a
//! TF-IDF content score for the text of the tweet being written.
//!
//! Besides the recommenders the crate ships the pieces needed to study and
//! benchmark them:
//!
//! - [`corpus`]: tweet / follow-graph parsing, chronological splits, usage index
//! - [`reuse`]: five-way reuse categorization, reuse-age histograms, log-log fits
//! - [`bll`]: activations, normalization, mixing, top-k ranking
//! - [`content`]: token → hashtag association profiles and the hybrid ranker
//! - [`baselines`]: popularity and recency reference recommenders
//! - [`eval`]: top-k metrics and the offline evaluation protocol
//! - [`synth`]: seeded synthetic corpora with known reuse behaviour

pub mod baselines;
pub mod bll;
pub mod content;
pub mod corpus;
mod error;
pub mod eval;
pub mod reuse;
mod scored;
pub mod synth;

pub use error::{Error, Result};
pub use scored::{Scored, ScoredList};
