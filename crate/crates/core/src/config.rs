//! Run configuration: a `key = value` file plus per-key overrides.
//!
//! Keys are case-sensitive and may be written with `-` or `_`. Blank lines
//! and lines starting with `#` are ignored. Overrides are applied in order
//! after the file, so command-line flags win.

use std::fs;
use std::path::{Path, PathBuf};

use crate::corpus::ListFormat;
use crate::error::{Error, Result};
use crate::eval::{EvalSettings, RecommendMode, SplitLabel};
use crate::ids::{MovieId, UserId};
use crate::recsys::Hyper;
use crate::rerank::DEFAULT_MINKOWSKI_P;

/// Environment variable consulted when no `--config` is given.
pub const CONFIG_ENV: &str = "AFFECTREC_CONFIG";

// Fixed offsets added to the master seed, one per consumer.
pub const SEED_OFFSET_BALANCE: u64 = 1;
pub const SEED_OFFSET_SPLIT: u64 = 2;
pub const SEED_OFFSET_TRAIN: u64 = 3;
pub const SEED_OFFSET_SYNTH: u64 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub ratings: Option<PathBuf>,
    pub movies: Option<PathBuf>,
    pub links: Option<PathBuf>,
    pub overviews: Option<PathBuf>,
    /// Directory of WordNet-Affect `<emotion>.txt` lists.
    pub wordnet_dir: Option<PathBuf>,
    pub wordnet_format: ListFormat,
    /// Lexicon CSV directory; defaults to `<out>/lexicon`.
    pub lexicon_dir: Option<PathBuf>,
    /// Labeled corpus to balance and split.
    pub corpus: Option<PathBuf>,
    /// Labeled corpus for classifier evaluation; defaults to `<out>/corpus_test.csv`.
    pub test_corpus: Option<PathBuf>,
    /// Precomputed mvec CSV; defaults to `<out>/mvecs.csv`.
    pub mvecs: Option<PathBuf>,
    /// Model checkpoint; defaults to `<out>/model.ckpt`.
    pub model: Option<PathBuf>,
    /// Report TSV to replay instead of running an experiment.
    pub replay: Option<PathBuf>,
    pub out: PathBuf,

    pub k: usize,
    pub learning_rate: f64,
    pub regularization: f64,
    pub epochs: usize,
    pub init_range: f64,
    pub seed: u64,
    /// Constant neutral score of the lexicon classifier.
    pub alpha: f64,
    pub minkowski_p: f64,

    pub per_class: usize,
    pub train_frac: f64,

    pub splits: Vec<SplitLabel>,
    pub list_lengths: Vec<usize>,
    pub mode: RecommendMode,
    pub top_n: usize,
    pub user: Option<UserId>,
    pub seed_movie: Option<MovieId>,
    pub detail: bool,
}

impl Default for Config {
    fn default() -> Self {
        let h = Hyper::default();
        Self {
            ratings: None,
            movies: None,
            links: None,
            overviews: None,
            wordnet_dir: None,
            wordnet_format: ListFormat::TwoColumn,
            lexicon_dir: None,
            corpus: None,
            test_corpus: None,
            mvecs: None,
            model: None,
            replay: None,
            out: PathBuf::from("out"),
            k: h.k,
            learning_rate: h.learning_rate,
            regularization: h.regularization,
            epochs: h.epochs,
            init_range: h.init_range,
            seed: 42,
            alpha: 1.0,
            minkowski_p: DEFAULT_MINKOWSKI_P,
            per_class: 15_000,
            train_frac: 0.8,
            splits: SplitLabel::standard(),
            list_lengths: vec![20, 5, 10],
            mode: RecommendMode::Seed,
            top_n: 20,
            user: None,
            seed_movie: None,
            detail: false,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| num(key, s))
        .collect()
}

fn flag(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got {v:?}"))),
    }
}

impl Config {
    /// Set one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        let path = || Some(PathBuf::from(v));
        match key.as_str() {
            "ratings" => self.ratings = path(),
            "movies" => self.movies = path(),
            "links" => self.links = path(),
            "overviews" => self.overviews = path(),
            "wordnet_dir" => self.wordnet_dir = path(),
            "wordnet_format" => {
                self.wordnet_format = match v {
                    "two-column" | "two_column" => ListFormat::TwoColumn,
                    "multi-term" | "multi_term" => ListFormat::MultiTerm,
                    _ => return Err(Error::Config(format!("wordnet_format: unknown {v:?}"))),
                }
            }
            "lexicon_dir" => self.lexicon_dir = path(),
            "corpus" => self.corpus = path(),
            "test_corpus" => self.test_corpus = path(),
            "mvecs" => self.mvecs = path(),
            "model" => self.model = path(),
            "replay" => self.replay = path(),
            "out" => self.out = PathBuf::from(v),
            "k" => self.k = num(&key, v)?,
            "learning_rate" | "lr" => self.learning_rate = num(&key, v)?,
            "regularization" | "reg" => self.regularization = num(&key, v)?,
            "epochs" => self.epochs = num(&key, v)?,
            "init_range" => self.init_range = num(&key, v)?,
            "seed" => self.seed = num(&key, v)?,
            "alpha" => self.alpha = num(&key, v)?,
            "minkowski_p" => self.minkowski_p = num(&key, v)?,
            "per_class" => self.per_class = num(&key, v)?,
            "train_frac" => self.train_frac = num(&key, v)?,
            "splits" => self.splits = list(&key, v)?,
            "list_lengths" => self.list_lengths = list(&key, v)?,
            "mode" => self.mode = v.parse()?,
            "top_n" => self.top_n = num(&key, v)?,
            "user" => self.user = Some(num(&key, v)?),
            "seed_movie" => self.seed_movie = Some(num(&key, v)?),
            "detail" => self.detail = flag(&key, v)?,
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Apply a `key = value` document on top of `self`.
    pub fn apply_text(&mut self, text: &str, file: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("{file}:{}: expected `key = value`", i + 1)))?;
            self.set(k, v)
                .map_err(|e| Error::Config(format!("{file}:{}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut c = Self::default();
        c.apply_text(&text, &path.display().to_string())?;
        Ok(c)
    }

    /// Config file (explicit path, else `$AFFECTREC_CONFIG`, else defaults)
    /// followed by overrides.
    pub fn load<'a>(
        path: Option<&Path>,
        overrides: impl IntoIterator<Item = (&'a str, String)>,
    ) -> Result<Self> {
        let env_path = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        let mut c = match path.or(env_path.as_deref()) {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        for (k, v) in overrides {
            c.set(k, &v)?;
        }
        Ok(c)
    }

    pub fn seed_for(&self, offset: u64) -> u64 {
        self.seed.wrapping_add(offset)
    }

    pub fn hyper(&self) -> Hyper {
        Hyper {
            k: self.k,
            learning_rate: self.learning_rate,
            regularization: self.regularization,
            epochs: self.epochs,
            seed: self.seed_for(SEED_OFFSET_TRAIN),
            init_range: self.init_range,
        }
    }

    pub fn eval_settings(&self) -> EvalSettings {
        EvalSettings {
            splits: self.splits.clone(),
            list_lengths: self.list_lengths.clone(),
            minkowski_p: self.minkowski_p,
            mode: self.mode,
            keep_details: self.detail,
        }
    }

    pub fn lexicon_dir(&self) -> PathBuf {
        self.lexicon_dir.clone().unwrap_or_else(|| self.out.join("lexicon"))
    }

    pub fn test_corpus(&self) -> PathBuf {
        self.test_corpus.clone().unwrap_or_else(|| self.out.join("corpus_test.csv"))
    }

    pub fn mvecs(&self) -> PathBuf {
        self.mvecs.clone().unwrap_or_else(|| self.out.join("mvecs.csv"))
    }

    pub fn model(&self) -> PathBuf {
        self.model.clone().unwrap_or_else(|| self.out.join("model.ckpt"))
    }

    /// A required path setting, checked for existence.
    pub fn require(&self, key: &str, value: &Option<PathBuf>) -> Result<PathBuf> {
        let p = value
            .clone()
            .ok_or_else(|| Error::Config(format!("missing required setting `{key}`")))?;
        require_exists(&p)?;
        Ok(p)
    }
}

pub fn require_exists(p: &Path) -> Result<()> {
    if p.exists() {
        Ok(())
    } else {
        Err(Error::io(
            p,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory"),
        ))
    }
}
