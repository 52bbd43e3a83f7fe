use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

use affectrec::commands::{self, Output};
use affectrec::config::Config;
use affectrec::eval::EvalReport;
use affectrec::synth::{SynthSpec, SynthWorld};

type Cmd = fn(&Config) -> affectrec::Result<Output>;

const STAGES: [(&str, Cmd); 6] = [
    ("build-lexicon", commands::cmd_build_lexicon),
    ("prep-corpus", commands::cmd_prep_corpus),
    ("classify", commands::cmd_classify),
    ("eval-classifier", commands::cmd_eval_classifier),
    ("train", commands::cmd_train),
    ("evaluate", commands::cmd_evaluate),
];

fn config(conf: &Path, out: &Path) -> Config {
    let mut c = Config::load(Some(conf), [("out", out.display().to_string())]).unwrap();
    c.detail = true;
    c
}

fn run_pipeline(conf: &Path, out: &Path) -> Vec<String> {
    let cfg = config(conf, out);
    let mut messages = Vec::new();
    for (name, cmd) in STAGES {
        let o = cmd(&cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
        o.write().unwrap();
        messages.push(o.message);
    }
    messages
}

fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                out.insert(rel, fs::read(&p).unwrap());
            }
        }
    }
    out
}

fn fixture(users: u32) -> (tempfile::TempDir, std::path::PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let paths = SynthWorld::generate(&SynthSpec { users, ..SynthSpec::default() })
        .write_to_dir(dir.path())
        .unwrap();
    (dir, paths.config)
}

#[test]
fn two_runs_are_byte_identical() {
    let (dir, conf) = fixture(20);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let ma = run_pipeline(&conf, &a);
    let mb = run_pipeline(&conf, &b);
    assert_eq!(ma, mb);
    let (ta, tb) = (tree(&a), tree(&b));
    for f in ["lexicon/joy.csv", "mvecs.csv", "model.ckpt", "report.tsv", "detail.csv", "corpus_train.csv"] {
        assert!(ta.contains_key(f), "missing {f}");
    }
    assert_eq!(ta, tb);
}

#[test]
fn seed_changes_the_model() {
    let (dir, conf) = fixture(10);
    let out = dir.path().join("o");
    let mut cfg = config(&conf, &out);
    let a = commands::cmd_train(&cfg).unwrap();
    cfg.seed += 1;
    let b = commands::cmd_train(&cfg).unwrap();
    assert_ne!(a.files[0].1, b.files[0].1);
}

#[test]
fn evaluate_reports_full_grid_and_winner() {
    let (dir, conf) = fixture(20);
    let out = dir.path().join("o");
    let messages = run_pipeline(&conf, &out);
    let last = messages.last().unwrap().lines().last().unwrap().to_string();
    assert!(last.starts_with("winner: "), "{last}");
    let report = EvalReport::from_tsv(&fs::read_to_string(out.join("report.tsv")).unwrap()).unwrap();
    assert_eq!(report.list_lengths, vec![20, 5, 10]);
    assert_eq!(report.cells.len(), 9);
    assert!(report.cells.iter().all(|per_len| per_len.len() == 3));
    for split in &report.cells {
        let top20 = split[0];
        assert!(top20.iter().all(|x| *x == top20[0]));
    }
}

#[test]
fn replay_of_published_grid_picks_cosine() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.tsv");
    fs::write(&grid, include_str!("../data/published_grid.tsv")).unwrap();
    let cfg = Config {
        replay: Some(grid),
        out: dir.path().join("o"),
        ..Config::default()
    };
    let o = commands::cmd_evaluate(&cfg).unwrap();
    assert!(o.files.is_empty());
    assert_eq!(o.message.lines().last(), Some("winner: Cos"));
}

#[test]
fn empty_overview_file_gives_header_only_mvecs() {
    let (dir, conf) = fixture(5);
    let out = dir.path().join("o");
    let mut cfg = config(&conf, &out);
    commands::cmd_build_lexicon(&cfg).unwrap().write().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    cfg.overviews = Some(empty);
    commands::cmd_classify(&cfg).unwrap().write().unwrap();
    let text = fs::read_to_string(out.join("mvecs.csv")).unwrap();
    assert_eq!(text, "movieId,m_neutral,m_joy,m_sadness,m_hate,m_anger,m_disgust,m_surprise\n");
}

#[test]
fn failing_command_leaves_no_artifacts() {
    let (dir, conf) = fixture(5);
    let out = dir.path().join("o");
    let cfg = config(&conf, &out);
    // no lexicon, mvecs or model yet
    assert!(commands::cmd_classify(&cfg).is_err());
    assert!(commands::cmd_evaluate(&cfg).is_err());
    assert!(commands::cmd_rerank(&Config { user: Some(1.into()), ..cfg.clone() }).is_err());
    assert!(!out.exists());

    let mut bad = cfg.clone();
    bad.per_class = 1_000_000;
    assert!(commands::cmd_prep_corpus(&bad).is_err());
    assert!(!out.exists());
}

#[test]
fn recommend_and_rerank_outputs() {
    let (dir, conf) = fixture(20);
    let out = dir.path().join("o");
    run_pipeline(&conf, &out);
    let mut cfg = config(&conf, &out);
    cfg.user = Some(3.into());
    let rec = commands::cmd_recommend(&cfg).unwrap();
    assert_eq!(rec.message.lines().count(), 21);
    let rr = commands::cmd_rerank(&cfg).unwrap();
    let names: Vec<String> = rr
        .paths()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        names,
        ["rerank_mid.csv", "rerank_euc.csv", "rerank_mht.csv", "rerank_mki.csv", "rerank_cos.csv", "rerank_pear.csv"]
    );
    // every reranked list is a permutation of the recommender's list
    let ids = |bytes: &[u8]| {
        let mut v: Vec<String> = String::from_utf8_lossy(bytes)
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().to_string())
            .collect();
        v.sort();
        v
    };
    let base = ids(&rr.files[0].1);
    assert_eq!(base.len(), 20);
    for (_, bytes) in &rr.files[1..] {
        assert_eq!(ids(bytes), base);
    }
}

#[test]
fn binary_reads_config_from_env_and_flags_win() {
    let (dir, conf) = fixture(5);
    let out = dir.path().join("o");
    let bin = env!("CARGO_BIN_EXE_affectrec");
    let ok = Command::new(bin)
        .args(["build-lexicon", "--out"])
        .arg(&out)
        .env("AFFECTREC_CONFIG", &conf)
        .output()
        .unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(out.join("lexicon/anger.csv").exists());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("total"));

    let bad = Command::new(bin)
        .args(["train", "--k", "zero", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert!(!bad.status.success());
    let err = String::from_utf8_lossy(&bad.stderr);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(!out.join("model.ckpt").exists());
}
