//! Emotion-aware movie recommendation.
//!
//! Movies get a seven-component emotion vector (`mvec`) derived from their
//! overview text. Users get a profile (`uvec`) that is the mean of the mvecs
//! of the movies they watched. A biased matrix-factorization recommender
//! produces a top-N list, which is then reranked against the user's profile
//! with one of five vector metrics and scored by hit rate against the user's
//! chronologically held-out history.
//!
//! The pipeline, bottom-up:
//!
//! - [`corpus`]: emotion classes, synonym lexicons, labeled text corpora
//! - [`emotion`]: emotion vectors, the lexicon classifier, classifier metrics
//! - [`affect`]: movie and user emotion profiles
//! - [`recsys`]: SGD matrix factorization and top-N generation
//! - [`rerank`]: distance/similarity metrics and reranking
//! - [`eval`]: per-user chronological splits, hit rates, report grid
//! - [`ingest`]: MovieLens / overview file loading and joining
//! - [`commands`]: the subcommand layer used by the `affectrec` binary
//!
//! See the crate's `examples/` directory for one runnable program per stage.

pub mod affect;
pub mod commands;
pub mod config;
pub mod corpus;
pub mod emotion;
pub mod error;
pub mod eval;
pub mod ids;
pub mod ingest;
pub mod recsys;
pub mod rerank;
pub mod synth;

pub use crate::corpus::{EmotionClass, LabeledCorpus, SynonymLexicon};
pub use crate::emotion::{EmotionClassifier, EmotionVector, LexiconClassifier};
pub use crate::error::{Error, Result};
pub use crate::ids::{MovieId, UserId};
pub use crate::recsys::{FactorModel, Hyper, RatingEvent, RecList};
pub use crate::rerank::Metric;
