use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use affectrec::commands::{self, Output};
use affectrec::config::{Config, CONFIG_ENV};

#[derive(Parser)]
#[command(name = "affectrec", version, about = "Emotion-aware reranking of movie recommendations")]
struct Cli {
    /// `key = value` config file.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(flatten)]
    keys: Overrides,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// WordNet-Affect lists -> lexicon CSVs
    BuildLexicon,
    /// Balance and split a labeled corpus
    PrepCorpus,
    /// Overviews -> movie emotion vectors
    Classify,
    /// Precision/recall/F1 of the lexicon classifier
    EvalClassifier,
    /// Train the factor model
    Train,
    /// Top-N for a seed movie or a user
    Recommend,
    /// Rerank a user's top-N with every metric
    Rerank,
    /// Hit-rate grid and winning metric
    Evaluate,
}

/// Every config key as a flag; flags override the file.
#[derive(Args)]
struct Overrides {
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    out: Option<String>,
    /// Also write per-user detail rows.
    #[arg(long, global = true)]
    detail: bool,
    #[arg(long, global = true)]
    ratings: Option<String>,
    #[arg(long, global = true)]
    movies: Option<String>,
    #[arg(long, global = true)]
    links: Option<String>,
    #[arg(long, global = true)]
    overviews: Option<String>,
    #[arg(long, global = true)]
    wordnet_dir: Option<String>,
    /// two-column or multi-term
    #[arg(long, global = true)]
    wordnet_format: Option<String>,
    #[arg(long, global = true)]
    lexicon_dir: Option<String>,
    #[arg(long, global = true)]
    corpus: Option<String>,
    #[arg(long, global = true)]
    test_corpus: Option<String>,
    #[arg(long, global = true)]
    mvecs: Option<String>,
    #[arg(long, global = true)]
    model: Option<String>,
    /// Report TSV to replay instead of running the experiment.
    #[arg(long, global = true)]
    replay: Option<String>,
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    learning_rate: Option<String>,
    #[arg(long, global = true)]
    regularization: Option<String>,
    #[arg(long, global = true)]
    epochs: Option<String>,
    #[arg(long, global = true)]
    init_range: Option<String>,
    #[arg(long, global = true)]
    alpha: Option<String>,
    #[arg(long, global = true)]
    minkowski_p: Option<String>,
    #[arg(long, global = true)]
    per_class: Option<String>,
    #[arg(long, global = true)]
    train_frac: Option<String>,
    /// Comma-separated, e.g. 20-80,50-50
    #[arg(long, global = true)]
    splits: Option<String>,
    /// Comma-separated, e.g. 20,5,10
    #[arg(long, global = true)]
    list_lengths: Option<String>,
    /// seed or user
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true)]
    top_n: Option<String>,
    #[arg(long, global = true)]
    user: Option<String>,
    #[arg(long, global = true)]
    seed_movie: Option<String>,
}

impl Overrides {
    fn pairs(self) -> Vec<(&'static str, String)> {
        let all = [
            ("seed", self.seed),
            ("out", self.out),
            ("detail", self.detail.then(|| "true".to_string())),
            ("ratings", self.ratings),
            ("movies", self.movies),
            ("links", self.links),
            ("overviews", self.overviews),
            ("wordnet_dir", self.wordnet_dir),
            ("wordnet_format", self.wordnet_format),
            ("lexicon_dir", self.lexicon_dir),
            ("corpus", self.corpus),
            ("test_corpus", self.test_corpus),
            ("mvecs", self.mvecs),
            ("model", self.model),
            ("replay", self.replay),
            ("k", self.k),
            ("learning_rate", self.learning_rate),
            ("regularization", self.regularization),
            ("epochs", self.epochs),
            ("init_range", self.init_range),
            ("alpha", self.alpha),
            ("minkowski_p", self.minkowski_p),
            ("per_class", self.per_class),
            ("train_frac", self.train_frac),
            ("splits", self.splits),
            ("list_lengths", self.list_lengths),
            ("mode", self.mode),
            ("top_n", self.top_n),
            ("user", self.user),
            ("seed_movie", self.seed_movie),
        ];
        all.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect()
    }
}

fn run(cli: Cli) -> affectrec::Result<Output> {
    let cfg = Config::load(cli.config.as_deref(), cli.keys.pairs())?;
    let out = match cli.cmd {
        Cmd::BuildLexicon => commands::cmd_build_lexicon(&cfg)?,
        Cmd::PrepCorpus => commands::cmd_prep_corpus(&cfg)?,
        Cmd::Classify => commands::cmd_classify(&cfg)?,
        Cmd::EvalClassifier => commands::cmd_eval_classifier(&cfg)?,
        Cmd::Train => commands::cmd_train(&cfg)?,
        Cmd::Recommend => commands::cmd_recommend(&cfg)?,
        Cmd::Rerank => commands::cmd_rerank(&cfg)?,
        Cmd::Evaluate => commands::cmd_evaluate(&cfg)?,
    };
    out.write()?;
    Ok(out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.message);
            for p in out.paths() {
                log::info!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("affectrec: {e}");
            ExitCode::FAILURE
        }
    }
}
