//! Emotion classes, synonym lexicons and labeled text corpora.
//!
//! The lexicon is built from WordNet-Affect emotion lists: one plain-text file
//! per emotion, each line holding a synset id and a synonym term. Terms are
//! normalized (lowercased, trimmed, underscores turned into spaces), then
//! deduplicated and kept in sorted order.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The seven emotion classes, in canonical index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmotionClass {
    Neutral = 0,
    Joy = 1,
    Sadness = 2,
    Hate = 3,
    Anger = 4,
    Disgust = 5,
    Surprise = 6,
}

impl EmotionClass {
    pub const COUNT: usize = 7;

    pub const ALL: [EmotionClass; 7] = [
        EmotionClass::Neutral,
        EmotionClass::Joy,
        EmotionClass::Sadness,
        EmotionClass::Hate,
        EmotionClass::Anger,
        EmotionClass::Disgust,
        EmotionClass::Surprise,
    ];

    /// The six classes that have a WordNet-Affect list.
    pub const LEXICAL: [EmotionClass; 6] = [
        EmotionClass::Joy,
        EmotionClass::Sadness,
        EmotionClass::Hate,
        EmotionClass::Anger,
        EmotionClass::Disgust,
        EmotionClass::Surprise,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            EmotionClass::Neutral => "neutral",
            EmotionClass::Joy => "joy",
            EmotionClass::Sadness => "sadness",
            EmotionClass::Hate => "hate",
            EmotionClass::Anger => "anger",
            EmotionClass::Disgust => "disgust",
            EmotionClass::Surprise => "surprise",
        }
    }
}

impl fmt::Display for EmotionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EmotionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        EmotionClass::ALL
            .into_iter()
            .find(|c| c.name() == lower)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown emotion class {s:?}")))
    }
}

/// Lowercase, trim, and replace each run of underscores with one space.
pub fn normalize_term(raw: &str) -> String {
    let lower = raw.trim().to_lowercase();
    let mut out = String::with_capacity(lower.len());
    let mut in_underscore = false;
    for ch in lower.chars() {
        if ch == '_' {
            if !in_underscore {
                out.push(' ');
            }
            in_underscore = true;
        } else {
            out.push(ch);
            in_underscore = false;
        }
    }
    out.trim().to_string()
}

/// Per-emotion sorted, deduplicated synonym sets. Neutral is always empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    terms: [BTreeSet<String>; 7],
}

impl SynonymLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a normalized term. Neutral terms and empty terms are rejected.
    pub fn insert(&mut self, class: EmotionClass, term: &str) -> Result<bool> {
        if class == EmotionClass::Neutral {
            return Err(Error::InvalidParameter(
                "the neutral class has no lexicon".into(),
            ));
        }
        let term = normalize_term(term);
        if term.is_empty() {
            return Ok(false);
        }
        Ok(self.terms[class.index()].insert(term))
    }

    pub fn terms(&self, class: EmotionClass) -> &BTreeSet<String> {
        &self.terms[class.index()]
    }

    pub fn len(&self, class: EmotionClass) -> usize {
        self.terms[class.index()].len()
    }

    pub fn total_len(&self) -> usize {
        self.terms.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_len() == 0
    }

    /// Write `<dir>/<emotion>.csv` for each of the six lexical emotions.
    pub fn write_csv_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut written = Vec::new();
        for class in EmotionClass::LEXICAL {
            let path = dir.join(format!("{}.csv", class.name()));
            let bytes = self.to_csv_bytes(class)?;
            fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }

    /// One-column CSV (`term` header, LF endings) for a single emotion.
    pub fn to_csv_bytes(&self, class: EmotionClass) -> Result<Vec<u8>> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let name = format!("{}.csv", class.name());
        wtr.write_record(["term"]).map_err(|e| Error::csv(&name, e))?;
        for term in self.terms(class) {
            wtr.write_record([term]).map_err(|e| Error::csv(&name, e))?;
        }
        wtr.into_inner()
            .map_err(|e| Error::io(&name, e.into_error()))
    }

    /// Read the lexicon CSVs written by [`SynonymLexicon::write_csv_dir`].
    /// A missing file leaves that emotion empty.
    pub fn read_csv_dir(dir: &Path) -> Result<Self> {
        if !dir.is_dir() {
            return Err(Error::io(
                dir,
                std::io::Error::new(std::io::ErrorKind::NotFound, "lexicon directory not found"),
            ));
        }
        let mut lex = SynonymLexicon::new();
        for class in EmotionClass::LEXICAL {
            let path = dir.join(format!("{}.csv", class.name()));
            if !path.exists() {
                continue;
            }
            let name = path.display().to_string();
            let mut rdr = csv::Reader::from_path(&path).map_err(|e| Error::csv(&name, e))?;
            let headers = rdr.headers().map_err(|e| Error::csv(&name, e))?;
            if headers.len() != 1 || &headers[0] != "term" {
                return Err(Error::parse(&name, 1, "expected header `term`"));
            }
            for rec in rdr.records() {
                let rec = rec.map_err(|e| Error::csv(&name, e))?;
                lex.insert(class, &rec[0])?;
            }
        }
        Ok(lex)
    }
}

/// How the synonym column of a WordNet-Affect list line is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ListFormat {
    /// Exactly two whitespace-separated columns: synset id, one term.
    #[default]
    TwoColumn,
    /// Synset id followed by one or more terms (the layout of the public
    /// WordNet-Affect distribution).
    MultiTerm,
}

/// Parse one emotion list held in memory. `file` is only used in error messages.
pub fn parse_affect_list(
    lexicon: &mut SynonymLexicon,
    class: EmotionClass,
    file: &str,
    content: &str,
    format: ListFormat,
) -> Result<()> {
    // validate the whole file before touching the lexicon
    let mut terms = Vec::new();
    for (i, line) in content.lines().enumerate() {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            continue;
        }
        let ok = match format {
            ListFormat::TwoColumn => cols.len() == 2,
            ListFormat::MultiTerm => cols.len() >= 2,
        };
        if !ok {
            return Err(Error::parse(
                file,
                i as u64 + 1,
                format!("expected 2 columns, found {}", cols.len()),
            ));
        }
        terms.extend_from_slice(&cols[1..]);
    }
    for term in terms {
        lexicon.insert(class, term)?;
    }
    Ok(())
}

/// Build a lexicon from per-emotion WordNet-Affect list files.
pub fn parse_wordnet_affect_lists<P: AsRef<Path>>(
    files: &[(EmotionClass, P)],
) -> Result<SynonymLexicon> {
    parse_wordnet_affect_lists_with(files, ListFormat::TwoColumn)
}

pub fn parse_wordnet_affect_lists_with<P: AsRef<Path>>(
    files: &[(EmotionClass, P)],
    format: ListFormat,
) -> Result<SynonymLexicon> {
    let mut lex = SynonymLexicon::new();
    for (class, path) in files {
        let path = path.as_ref();
        let mut content = String::new();
        fs::File::open(path)
            .and_then(|mut f| f.read_to_string(&mut content))
            .map_err(|e| Error::io(path, e))?;
        parse_affect_list(&mut lex, *class, &path.display().to_string(), &content, format)?;
    }
    Ok(lex)
}

/// Parse `<dir>/<emotion>.txt` for the six lexical emotions.
pub fn parse_wordnet_affect_dir(dir: &Path, format: ListFormat) -> Result<SynonymLexicon> {
    let files: Vec<(EmotionClass, PathBuf)> = EmotionClass::LEXICAL
        .into_iter()
        .map(|c| (c, dir.join(format!("{}.txt", c.name()))))
        .collect();
    parse_wordnet_affect_lists_with(&files, format)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledText {
    pub text: String,
    pub label: EmotionClass,
}

/// A list of labeled texts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabeledCorpus {
    pub records: Vec<LabeledText>,
}

impl LabeledCorpus {
    pub fn new(records: Vec<LabeledText>) -> Self {
        Self { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn class_counts(&self) -> [usize; 7] {
        let mut counts = [0; 7];
        for r in &self.records {
            counts[r.label.index()] += 1;
        }
        counts
    }

    fn indices_by_class(&self) -> [Vec<usize>; 7] {
        let mut by_class: [Vec<usize>; 7] = Default::default();
        for (i, r) in self.records.iter().enumerate() {
            by_class[r.label.index()].push(i);
        }
        by_class
    }

    fn pick(&self, indices: &[usize]) -> LabeledCorpus {
        LabeledCorpus::new(indices.iter().map(|&i| self.records[i].clone()).collect())
    }

    /// Read a `text,label` CSV (RFC-4180 quoting).
    pub fn read_csv<R: Read>(reader: R, file: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::csv(file, e))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["text", "label"] {
            return Err(Error::parse(file, 1, "expected header `text,label`"));
        }
        let mut records = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::csv(file, e))?;
            let line = rec.position().map_or(0, |p| p.line());
            let label = rec[1]
                .parse::<EmotionClass>()
                .map_err(|e| Error::parse(file, line, e.to_string()))?;
            records.push(LabeledText {
                text: rec[0].to_string(),
                label,
            });
        }
        Ok(Self { records })
    }

    pub fn read_csv_path(path: &Path) -> Result<Self> {
        let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(f, &path.display().to_string())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        wtr.write_record(["text", "label"])
            .map_err(|e| Error::csv("corpus", e))?;
        for r in &self.records {
            wtr.write_record([r.text.as_str(), r.label.name()])
                .map_err(|e| Error::csv("corpus", e))?;
        }
        wtr.flush().map_err(|e| Error::io("corpus", e))
    }
}

/// Subsample every class to exactly `n_per_class` records, uniformly without
/// replacement. Output is grouped by class in canonical order, each group in
/// original corpus order.
pub fn balance_corpus(corpus: &LabeledCorpus, n_per_class: usize, seed: u64) -> Result<LabeledCorpus> {
    let by_class = corpus.indices_by_class();
    for class in EmotionClass::ALL {
        let have = by_class[class.index()].len();
        if have < n_per_class {
            return Err(Error::InsufficientData {
                class,
                have,
                need: n_per_class,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = Vec::with_capacity(n_per_class * EmotionClass::COUNT);
    for mut idx in by_class {
        idx.shuffle(&mut rng);
        idx.truncate(n_per_class);
        idx.sort_unstable();
        chosen.extend(idx);
    }
    Ok(corpus.pick(&chosen))
}

/// Stratified split: each class contributes `floor(train_frac * size)` records
/// to train and the rest to test.
pub fn split_corpus(
    corpus: &LabeledCorpus,
    train_frac: f64,
    seed: u64,
) -> Result<(LabeledCorpus, LabeledCorpus)> {
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train fraction {train_frac} outside (0, 1)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for mut idx in corpus.indices_by_class() {
        // the epsilon keeps products like 0.57 * 100 from flooring to 56
        let n_train = ((train_frac * idx.len() as f64) + 1e-9).floor() as usize;
        idx.shuffle(&mut rng);
        let (a, b) = idx.split_at_mut(n_train);
        a.sort_unstable();
        b.sort_unstable();
        train.extend_from_slice(a);
        test.extend_from_slice(b);
    }
    Ok((corpus.pick(&train), corpus.pick(&test)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus_with_counts(counts: [usize; 7]) -> LabeledCorpus {
        let mut records = Vec::new();
        for class in EmotionClass::ALL {
            for i in 0..counts[class.index()] {
                records.push(LabeledText {
                    text: format!("{} {i}", class.name()),
                    label: class,
                });
            }
        }
        LabeledCorpus::new(records)
    }

    #[test]
    fn class_order_is_canonical() {
        let names: Vec<_> = EmotionClass::ALL.iter().map(|c| c.name()).collect();
        assert_eq!(
            names,
            ["neutral", "joy", "sadness", "hate", "anger", "disgust", "surprise"]
        );
        for (i, c) in EmotionClass::ALL.iter().enumerate() {
            assert_eq!(c.index(), i);
            assert_eq!(EmotionClass::from_index(i), Some(*c));
        }
        assert_eq!("Anger".parse::<EmotionClass>().unwrap(), EmotionClass::Anger);
        assert!("fear".parse::<EmotionClass>().is_err());
    }

    #[test]
    fn normalizes_terms() {
        assert_eq!(normalize_term("  Heart__Sick "), "heart sick");
        assert_eq!(normalize_term("in_high_spirits"), "in high spirits");
        assert_eq!(normalize_term("ABHOR"), "abhor");
    }

    #[test]
    fn dedupes_and_sorts() {
        let mut lex = SynonymLexicon::new();
        parse_affect_list(
            &mut lex,
            EmotionClass::Anger,
            "anger.txt",
            "a#1 abhor\na#2 abhor\na#3 detest\n",
            ListFormat::TwoColumn,
        )
        .unwrap();
        let terms: Vec<_> = lex.terms(EmotionClass::Anger).iter().cloned().collect();
        assert_eq!(terms, ["abhor", "detest"]);
        assert!(lex.terms(EmotionClass::Neutral).is_empty());
    }

    #[test]
    fn empty_file_gives_empty_set() {
        let mut lex = SynonymLexicon::new();
        parse_affect_list(&mut lex, EmotionClass::Joy, "joy.txt", "", ListFormat::TwoColumn).unwrap();
        assert_eq!(lex.len(EmotionClass::Joy), 0);
    }

    #[test]
    fn malformed_line_names_file_and_line() {
        let mut lex = SynonymLexicon::new();
        let err = parse_affect_list(
            &mut lex,
            EmotionClass::Hate,
            "hate.txt",
            "n#1 hate\nn#2 hatred loathing\n",
            ListFormat::TwoColumn,
        )
        .unwrap_err();
        match err {
            Error::Parse { file, line, .. } => {
                assert_eq!(file, "hate.txt");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        // the lenient layout accepts the same line
        parse_affect_list(
            &mut lex,
            EmotionClass::Hate,
            "hate.txt",
            "n#2 hatred loathing\nn#3 odium\n",
            ListFormat::MultiTerm,
        )
        .unwrap();
        assert_eq!(lex.len(EmotionClass::Hate), 3);
    }

    #[test]
    fn neutral_insert_rejected() {
        let mut lex = SynonymLexicon::new();
        assert!(lex.insert(EmotionClass::Neutral, "meh").is_err());
    }

    #[test]
    fn lexicon_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut lex = SynonymLexicon::new();
        for (c, t) in [
            (EmotionClass::Joy, "glee"),
            (EmotionClass::Joy, "in_high_spirits"),
            (EmotionClass::Disgust, "yucky"),
            (EmotionClass::Surprise, "say, \"wow\""),
        ] {
            lex.insert(c, t).unwrap();
        }
        lex.write_csv_dir(dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join("joy.csv")).unwrap();
        assert_eq!(text, "term\nglee\nin high spirits\n");
        assert_eq!(SynonymLexicon::read_csv_dir(dir.path()).unwrap(), lex);
    }

    #[test]
    fn balance_exact_counts_and_determinism() {
        let corpus = corpus_with_counts([30, 50, 40, 25, 20, 26, 21]);
        let a = balance_corpus(&corpus, 20, 7).unwrap();
        assert_eq!(a.class_counts(), [20; 7]);
        let b = balance_corpus(&corpus, 20, 7).unwrap();
        assert_eq!(a, b);
        let c = balance_corpus(&corpus, 20, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn balance_smallest_class_passes_through() {
        let corpus = corpus_with_counts([30, 50, 40, 25, 20, 26, 21]);
        let out = balance_corpus(&corpus, 20, 1).unwrap();
        let anger_in: BTreeSet<_> = corpus
            .records
            .iter()
            .filter(|r| r.label == EmotionClass::Anger)
            .collect();
        let anger_out: BTreeSet<_> = out
            .records
            .iter()
            .filter(|r| r.label == EmotionClass::Anger)
            .collect();
        assert_eq!(anger_in, anger_out);
    }

    #[test]
    fn balance_insufficient_names_class() {
        let corpus = corpus_with_counts([30, 50, 40, 25, 10, 26, 21]);
        match balance_corpus(&corpus, 20, 1).unwrap_err() {
            Error::InsufficientData { class, have, need } => {
                assert_eq!(class, EmotionClass::Anger);
                assert_eq!((have, need), (10, 20));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn split_half_of_two() {
        let corpus = LabeledCorpus::new(vec![
            LabeledText { text: "a".into(), label: EmotionClass::Joy },
            LabeledText { text: "b".into(), label: EmotionClass::Joy },
        ]);
        let (train, test) = split_corpus(&corpus, 0.5, 3).unwrap();
        assert_eq!((train.len(), test.len()), (1, 1));
    }

    #[test]
    fn split_rejects_bad_input() {
        assert!(split_corpus(&LabeledCorpus::default(), 0.8, 0).is_err());
        let corpus = corpus_with_counts([2; 7]);
        assert!(split_corpus(&corpus, 1.0, 0).is_err());
        assert!(split_corpus(&corpus, 0.0, 0).is_err());
    }

    #[test]
    fn split_is_disjoint_and_covers() {
        // membership oracle on a random 100-record corpus
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let records: Vec<_> = (0..100)
            .map(|i| LabeledText {
                text: format!("record {i}"),
                label: EmotionClass::ALL[rng.random_range(0..7)],
            })
            .collect();
        let corpus = LabeledCorpus::new(records);
        let (train, test) = split_corpus(&corpus, 0.7, 5).unwrap();
        let tr: BTreeSet<_> = train.records.iter().map(|r| r.text.clone()).collect();
        let te: BTreeSet<_> = test.records.iter().map(|r| r.text.clone()).collect();
        assert!(tr.is_disjoint(&te));
        let all: BTreeSet<_> = corpus.records.iter().map(|r| r.text.clone()).collect();
        assert_eq!(tr.union(&te).cloned().collect::<BTreeSet<_>>(), all);
        let counts = corpus.class_counts();
        let trc = train.class_counts();
        for c in 0..7 {
            assert_eq!(trc[c], (0.7 * counts[c] as f64 + 1e-9).floor() as usize);
        }
    }

    #[test]
    fn corpus_csv_quotes_round_trip() {
        let corpus = LabeledCorpus::new(vec![
            LabeledText { text: "plain".into(), label: EmotionClass::Neutral },
            LabeledText { text: "comma, \"quote\"\nnewline".into(), label: EmotionClass::Surprise },
        ]);
        let mut buf = Vec::new();
        corpus.write_csv(&mut buf).unwrap();
        let back = LabeledCorpus::read_csv(buf.as_slice(), "mem").unwrap();
        assert_eq!(back, corpus);
        assert!(LabeledCorpus::read_csv("text,label\nhi,fear\n".as_bytes(), "mem").is_err());
        assert!(LabeledCorpus::read_csv("label,text\n".as_bytes(), "mem").is_err());
    }
}
