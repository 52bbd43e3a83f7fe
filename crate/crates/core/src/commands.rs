//! One function per CLI subcommand.
//!
//! Every command reads and validates all of its inputs and computes all of
//! its outputs in memory, returning them as an [`Output`]. Nothing touches
//! the filesystem until [`Output::write`], so a failing command leaves no
//! partial artifacts behind.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::PathBuf;

use log::info;

use crate::affect::profile_from_history;
use crate::config::{require_exists, Config, SEED_OFFSET_BALANCE, SEED_OFFSET_SPLIT};
use crate::corpus::{balance_corpus, parse_wordnet_affect_dir, split_corpus, EmotionClass, LabeledCorpus, SynonymLexicon};
use crate::emotion::{
    dominant_emotion, evaluate_classifier, load_precomputed_vectors_path, write_mvec_csv, EmotionClassifier,
    EmotionVector, LexiconClassifier,
};
use crate::error::{Error, Result};
use crate::eval::{pick_winner, run_experiment, EvalReport, RecommendMode};
use crate::ids::MovieId;
use crate::ingest::{self, build_bundle, DatasetBundle, MovieCatalog, MvecSource};
use crate::recsys::{self, top_n_for_user, top_n_from_seed, FactorModel, RecList};
use crate::rerank::{rerank, Metric};

/// Files a command wants written, plus what it prints.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub files: Vec<(PathBuf, Vec<u8>)>,
    pub message: String,
}

impl Output {
    fn file(&mut self, path: PathBuf, bytes: impl Into<Vec<u8>>) {
        self.files.push((path, bytes.into()));
    }

    /// Write every file, creating parent directories.
    pub fn write(&self) -> Result<()> {
        for (path, bytes) in &self.files {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }

    pub fn paths(&self) -> impl Iterator<Item = &PathBuf> {
        self.files.iter().map(|(p, _)| p)
    }
}

fn classifier(cfg: &Config) -> Result<LexiconClassifier> {
    let lex = SynonymLexicon::read_csv_dir(&cfg.lexicon_dir())?;
    LexiconClassifier::new(&lex, cfg.alpha)
}

fn catalog(cfg: &Config) -> Result<MovieCatalog> {
    let movies = cfg.require("movies", &cfg.movies)?;
    let links = cfg.require("links", &cfg.links)?;
    Ok(ingest::load_movies_and_links_paths(&movies, &links)?.0)
}

fn load_model(cfg: &Config) -> Result<FactorModel> {
    let path = cfg.model();
    let f = fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
    FactorModel::read_checkpoint(BufReader::new(f), &path.display().to_string())
}

fn load_mvecs(cfg: &Config) -> Result<BTreeMap<MovieId, EmotionVector>> {
    let path = cfg.mvecs();
    require_exists(&path)?;
    load_precomputed_vectors_path(&path)
}

fn bundle(cfg: &Config) -> Result<DatasetBundle> {
    let ratings = ingest::load_ratings_path(&cfg.require("ratings", &cfg.ratings)?)?;
    let movies = catalog(cfg)?;
    let mvecs = load_mvecs(cfg)?;
    build_bundle(ratings, movies, MvecSource::Precomputed(mvecs))
}

/// WordNet-Affect lists to per-emotion lexicon CSVs.
pub fn cmd_build_lexicon(cfg: &Config) -> Result<Output> {
    let dir = cfg.require("wordnet_dir", &cfg.wordnet_dir)?;
    let lex = parse_wordnet_affect_dir(&dir, cfg.wordnet_format)?;
    let mut out = Output::default();
    let lex_dir = cfg.lexicon_dir();
    for class in EmotionClass::LEXICAL {
        out.file(lex_dir.join(format!("{}.csv", class.name())), lex.to_csv_bytes(class)?);
        let _ = writeln!(out.message, "{:<10}{}", class.name(), lex.len(class));
    }
    let _ = writeln!(out.message, "{:<10}{}", "total", lex.total_len());
    Ok(out)
}

/// Balance a labeled corpus and split it into train and test CSVs.
pub fn cmd_prep_corpus(cfg: &Config) -> Result<Output> {
    let corpus = LabeledCorpus::read_csv_path(&cfg.require("corpus", &cfg.corpus)?)?;
    let balanced = balance_corpus(&corpus, cfg.per_class, cfg.seed_for(SEED_OFFSET_BALANCE))?;
    let (train, test) = split_corpus(&balanced, cfg.train_frac, cfg.seed_for(SEED_OFFSET_SPLIT))?;
    let mut out = Output::default();
    let (mut a, mut b) = (Vec::new(), Vec::new());
    train.write_csv(&mut a)?;
    test.write_csv(&mut b)?;
    out.file(cfg.out.join("corpus_train.csv"), a);
    out.file(cfg.out.join("corpus_test.csv"), b);
    let _ = writeln!(out.message, "{:<10}{:>8}{:>8}{:>8}", "class", "input", "train", "test");
    let (ci, ctr, cte) = (corpus.class_counts(), train.class_counts(), test.class_counts());
    for c in EmotionClass::ALL {
        let i = c.index();
        let _ = writeln!(out.message, "{:<10}{:>8}{:>8}{:>8}", c.name(), ci[i], ctr[i], cte[i]);
    }
    Ok(out)
}

/// Classify every linked overview into an mvec CSV.
pub fn cmd_classify(cfg: &Config) -> Result<Output> {
    let clf = classifier(cfg)?;
    let mut movies = catalog(cfg)?;
    let cov = ingest::attach_overviews_path(&mut movies, &cfg.require("overviews", &cfg.overviews)?)?;
    let mvecs = ingest::classify_catalog(&movies, &clf);
    let mut bytes = Vec::new();
    write_mvec_csv(&mut bytes, &mvecs)?;
    let mut out = Output::default();
    out.file(cfg.mvecs(), bytes);
    let _ = writeln!(
        out.message,
        "movies={} with_overview={} unmatched_overview_rows={} mvecs={}",
        cov.movies,
        cov.with_overview,
        cov.unmatched_rows,
        mvecs.len()
    );
    Ok(out)
}

/// Score the lexicon classifier's dominant emotion against a labeled corpus.
pub fn cmd_eval_classifier(cfg: &Config) -> Result<Output> {
    let clf = classifier(cfg)?;
    let path = cfg.test_corpus();
    require_exists(&path)?;
    let corpus = LabeledCorpus::read_csv_path(&path)?;
    let gold: Vec<EmotionClass> = corpus.records.iter().map(|r| r.label).collect();
    let pred: Vec<EmotionClass> = corpus
        .records
        .iter()
        .map(|r| dominant_emotion(&clf.classify(&r.text)))
        .collect();
    let report = evaluate_classifier(&pred, &gold)?;
    let mut out = Output::default();
    out.file(cfg.out.join("classifier_metrics.csv"), report.to_csv());
    out.message = report.to_table();
    Ok(out)
}

/// Train the factor model on the ratings file.
pub fn cmd_train(cfg: &Config) -> Result<Output> {
    let ratings = ingest::load_ratings_path(&cfg.require("ratings", &cfg.ratings)?)?;
    let (model, losses) = recsys::train_logged(&ratings, &cfg.hyper())?;
    let mut out = Output::default();
    out.file(cfg.model(), model.to_checkpoint());
    let _ = writeln!(
        out.message,
        "users={} items={} k={} epochs={} train_rmse={:.4}",
        model.users().len(),
        model.items().len(),
        model.k(),
        losses.len(),
        model.rmse(&ratings)
    );
    Ok(out)
}

fn user_history(cfg: &Config, user: crate::ids::UserId) -> Result<Vec<MovieId>> {
    let ratings = ingest::load_ratings_path(&cfg.require("ratings", &cfg.ratings)?)?;
    let watched: Vec<MovieId> = ratings.iter().filter(|r| r.user == user).map(|r| r.movie).collect();
    if watched.is_empty() {
        return Err(Error::UnknownUser(user));
    }
    Ok(watched)
}

/// Candidate list for the configured user or seed movie.
fn candidates(cfg: &Config, model: &FactorModel, exclude: &HashSet<MovieId>, history: &[MovieId]) -> Result<RecList> {
    match (cfg.mode, cfg.user) {
        (RecommendMode::User, Some(user)) => top_n_for_user(model, user, cfg.top_n, exclude),
        (RecommendMode::User, None) => Err(Error::Config("mode = user needs `user`".into())),
        (RecommendMode::Seed, _) => {
            let seed = cfg
                .seed_movie
                .or_else(|| history.last().copied())
                .ok_or_else(|| Error::Config("mode = seed needs `seed_movie` or `user`".into()))?;
            top_n_from_seed(model, seed, cfg.top_n, exclude)
        }
    }
}

/// Top-N from the model, for a seed movie or a user.
pub fn cmd_recommend(cfg: &Config) -> Result<Output> {
    let model = load_model(cfg)?;
    let history = match cfg.user {
        Some(u) => user_history(cfg, u)?,
        None => Vec::new(),
    };
    let exclude: HashSet<MovieId> = history.iter().copied().collect();
    let list = candidates(cfg, &model, &exclude, &history)?;
    let mut out = Output::default();
    out.file(cfg.out.join("recommend.csv"), list.to_csv());
    out.message = list.to_csv();
    Ok(out)
}

/// Rerank a user's top-N with each of the five metrics.
pub fn cmd_rerank(cfg: &Config) -> Result<Output> {
    let user = cfg.user.ok_or_else(|| Error::Config("rerank needs `user`".into()))?;
    let model = load_model(cfg)?;
    let mvecs = load_mvecs(cfg)?;
    let history = user_history(cfg, user)?;
    let (profile, excluded) = profile_from_history(user, &history, &mvecs);
    let profile = profile.ok_or(Error::Empty("watched movies with an mvec"))?;
    info!("user {user}: {excluded} watched movies without an mvec left out of the profile");

    let mut exclude: HashSet<MovieId> = history.iter().copied().collect();
    exclude.extend(model.items().iter().filter(|m| !mvecs.contains_key(m)));
    let mid = candidates(cfg, &model, &exclude, &history)?;

    let mut out = Output::default();
    out.file(cfg.out.join("rerank_mid.csv"), mid.to_csv());
    let _ = writeln!(out.message, "user {user} uvec {:?}", profile.uvec.weights());
    let _ = writeln!(out.message, "Mid: {}", ids(&mid));
    for metric in Metric::all(cfg.minkowski_p) {
        let list = rerank(&mid, &mvecs, &profile.uvec, metric)?;
        let name = format!("rerank_{}.csv", metric.short_name().to_ascii_lowercase());
        let _ = writeln!(out.message, "{}: {}", metric.short_name(), ids(&list));
        out.file(cfg.out.join(name), list.to_csv());
    }
    Ok(out)
}

fn ids(list: &RecList) -> String {
    list.movie_ids().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")
}

/// Hit-rate grid over all splits, or a replay of a saved report.
pub fn cmd_evaluate(cfg: &Config) -> Result<Output> {
    let mut out = Output::default();
    let report = if let Some(path) = &cfg.replay {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        EvalReport::from_tsv(&text)?
    } else {
        let bundle = bundle(cfg)?;
        let model = load_model(cfg)?;
        let report = run_experiment(&bundle, &model, &cfg.eval_settings())?;
        out.file(cfg.out.join("report.tsv"), report.to_tsv());
        if cfg.detail {
            out.file(cfg.out.join("detail.csv"), report.detail_csv());
        }
        let _ = writeln!(out.message, "{}", bundle.coverage);
        report
    };
    out.message.push_str(&report.to_table());
    let _ = writeln!(out.message, "winner: {}", pick_winner(&report).label());
    Ok(out)
}
