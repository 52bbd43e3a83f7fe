//! Emotion vectors, text classification and classifier-quality metrics.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::ops::Index;
use std::path::Path;

use crate::corpus::{EmotionClass, SynonymLexicon};
use crate::error::{Error, Result};
use crate::ids::MovieId;

/// Tolerance on the unit-sum invariant.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Seven non-negative weights over [`EmotionClass`] that sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmotionVector([f64; 7]);

impl EmotionVector {
    /// Validate weights that are already normalized.
    pub fn new(weights: [f64; 7]) -> Result<Self> {
        check_components(&weights)?;
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidVector(format!("components sum to {sum}")));
        }
        Ok(Self(weights))
    }

    /// Scale non-negative weights so they sum to one.
    pub fn from_weights(weights: [f64; 7]) -> Result<Self> {
        check_components(&weights)?;
        let sum: f64 = weights.iter().sum();
        if sum <= 0.0 {
            return Err(Error::InvalidVector("all components are zero".into()));
        }
        Ok(Self(weights.map(|w| w / sum)))
    }

    /// All mass on one class.
    pub fn basis(class: EmotionClass) -> Self {
        let mut w = [0.0; 7];
        w[class.index()] = 1.0;
        Self(w)
    }

    pub fn neutral() -> Self {
        Self::basis(EmotionClass::Neutral)
    }

    pub fn uniform() -> Self {
        Self([1.0 / 7.0; 7])
    }

    pub fn weights(&self) -> &[f64; 7] {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, class: EmotionClass) -> f64 {
        self.0[class.index()]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub(crate) fn from_raw_unchecked(weights: [f64; 7]) -> Self {
        Self(weights)
    }
}

impl Index<EmotionClass> for EmotionVector {
    type Output = f64;

    fn index(&self, class: EmotionClass) -> &f64 {
        &self.0[class.index()]
    }
}

fn check_components(weights: &[f64; 7]) -> Result<()> {
    for (i, w) in weights.iter().enumerate() {
        if !w.is_finite() || *w < 0.0 {
            return Err(Error::InvalidVector(format!(
                "component {} = {w}",
                EmotionClass::ALL[i]
            )));
        }
    }
    Ok(())
}

/// Argmax class; ties go to the lowest canonical index.
pub fn dominant_emotion(v: &EmotionVector) -> EmotionClass {
    let mut best = 0;
    for i in 1..EmotionClass::COUNT {
        if v.0[i] > v.0[best] {
            best = i;
        }
    }
    EmotionClass::ALL[best]
}

/// Anything that turns text into an [`EmotionVector`].
pub trait EmotionClassifier: Send + Sync {
    fn classify(&self, text: &str) -> EmotionVector;
}

/// Lowercase, then split on runs of non-alphanumeric characters.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Lexicon-matching baseline classifier.
///
/// Each emotion scores one point per occurrence of one of its terms in the
/// text (single-word terms by token, multiword terms by sliding window over
/// the token sequence). Neutral scores the constant `neutral_weight`. The
/// scores are normalized to sum to one.
#[derive(Debug, Clone)]
pub struct LexiconClassifier {
    single: HashMap<String, Vec<EmotionClass>>,
    multi: HashMap<Vec<String>, Vec<EmotionClass>>,
    max_window: usize,
    neutral_weight: f64,
}

impl LexiconClassifier {
    pub fn new(lexicon: &SynonymLexicon, neutral_weight: f64) -> Result<Self> {
        if !(neutral_weight.is_finite() && neutral_weight > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "neutral weight must be positive, got {neutral_weight}"
            )));
        }
        let mut single: HashMap<String, Vec<EmotionClass>> = HashMap::new();
        let mut multi: HashMap<Vec<String>, Vec<EmotionClass>> = HashMap::new();
        let mut max_window = 1;
        for class in EmotionClass::LEXICAL {
            for term in lexicon.terms(class) {
                let tokens = tokenize(term);
                match tokens.len() {
                    0 => {}
                    1 => single.entry(tokens[0].clone()).or_default().push(class),
                    n => {
                        max_window = max_window.max(n);
                        multi.entry(tokens).or_default().push(class);
                    }
                }
            }
        }
        // a term listed twice under one class (e.g. "heart-sick" and
        // "heart_sick") still counts once per occurrence
        for classes in single.values_mut().chain(multi.values_mut()) {
            classes.dedup();
        }
        Ok(Self {
            single,
            multi,
            max_window,
            neutral_weight,
        })
    }

    pub fn neutral_weight(&self) -> f64 {
        self.neutral_weight
    }

    /// Raw per-class scores before normalization.
    pub fn scores(&self, text: &str) -> [f64; 7] {
        let tokens = tokenize(text);
        let mut scores = [0.0; 7];
        scores[EmotionClass::Neutral.index()] = self.neutral_weight;
        for tok in &tokens {
            if let Some(classes) = self.single.get(tok) {
                for c in classes {
                    scores[c.index()] += 1.0;
                }
            }
        }
        if !self.multi.is_empty() {
            for len in 2..=self.max_window.min(tokens.len()) {
                for window in tokens.windows(len) {
                    if let Some(classes) = self.multi.get(window) {
                        for c in classes {
                            scores[c.index()] += 1.0;
                        }
                    }
                }
            }
        }
        scores
    }
}

impl EmotionClassifier for LexiconClassifier {
    fn classify(&self, text: &str) -> EmotionVector {
        let scores = self.scores(text);
        let total: f64 = scores.iter().sum();
        // neutral_weight > 0 keeps total positive
        EmotionVector::from_raw_unchecked(scores.map(|s| s / total))
    }
}

pub fn classify_text(clf: &dyn EmotionClassifier, text: &str) -> EmotionVector {
    clf.classify(text)
}

/// Column names of the mvec CSV, after `movieId`.
pub const MVEC_COLUMNS: [&str; 7] = [
    "m_neutral",
    "m_joy",
    "m_sadness",
    "m_hate",
    "m_anger",
    "m_disgust",
    "m_surprise",
];

/// Load an mvec CSV. Rows are renormalized to sum to one.
pub fn load_precomputed_vectors<R: Read>(
    reader: R,
    file: &str,
) -> Result<BTreeMap<MovieId, EmotionVector>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::csv(file, e))?.clone();
    let expected: Vec<&str> = std::iter::once("movieId").chain(MVEC_COLUMNS).collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::parse(file, 1, format!("expected header `{}`", expected.join(","))));
    }
    let mut out = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::csv(file, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let movie: MovieId = rec[0]
            .parse()
            .map_err(|_| Error::parse(file, line, format!("bad movieId {:?}", &rec[0])))?;
        let mut w = [0.0; 7];
        for (i, slot) in w.iter_mut().enumerate() {
            *slot = rec[i + 1]
                .trim()
                .parse()
                .map_err(|_| Error::parse(file, line, format!("bad number {:?}", &rec[i + 1])))?;
        }
        let v = EmotionVector::from_weights(w)
            .map_err(|e| Error::parse(file, line, e.to_string()))?;
        if out.insert(movie, v).is_some() {
            return Err(Error::DuplicateKey(format!("movieId {movie} ({file}:{line})")));
        }
    }
    Ok(out)
}

pub fn load_precomputed_vectors_path(path: &Path) -> Result<BTreeMap<MovieId, EmotionVector>> {
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_precomputed_vectors(f, &path.display().to_string())
}

pub fn write_mvec_csv<'a, W: Write>(
    writer: W,
    rows: impl IntoIterator<Item = (&'a MovieId, &'a EmotionVector)>,
) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let header: Vec<&str> = std::iter::once("movieId").chain(MVEC_COLUMNS).collect();
    wtr.write_record(&header).map_err(|e| Error::csv("mvecs", e))?;
    for (movie, v) in rows {
        let mut rec = vec![movie.to_string()];
        rec.extend(v.weights().iter().map(|w| w.to_string()));
        wtr.write_record(&rec).map_err(|e| Error::csv("mvecs", e))?;
    }
    wtr.flush().map_err(|e| Error::io("mvecs", e))
}

/// F1 from precision and recall; 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Round half-up to `places` decimals, the way report tables are printed.
pub fn round_half_up(x: f64, places: i32) -> f64 {
    let scale = 10f64.powi(places);
    // nudge past binary representation error, e.g. 0.585 * 100 = 58.4999...
    ((x * scale) + 0.5 + 1e-9).floor() / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AveragedMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Per-class and averaged classification metrics plus the confusion matrix
/// (rows gold, columns predicted).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub per_class: [ClassMetrics; 7],
    pub accuracy: f64,
    pub macro_avg: AveragedMetrics,
    pub weighted_avg: AveragedMetrics,
    pub confusion: [[u64; 7]; 7],
    pub total: u64,
}

pub fn evaluate_classifier(predicted: &[EmotionClass], gold: &[EmotionClass]) -> Result<MetricsReport> {
    if predicted.len() != gold.len() {
        return Err(Error::LengthMismatch {
            left: predicted.len(),
            right: gold.len(),
        });
    }
    if gold.is_empty() {
        return Err(Error::Empty("prediction list"));
    }
    let mut confusion = [[0u64; 7]; 7];
    for (p, g) in predicted.iter().zip(gold) {
        confusion[g.index()][p.index()] += 1;
    }
    let total = gold.len() as u64;
    let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };

    let mut per_class = [ClassMetrics::default(); 7];
    let mut trace = 0;
    for c in 0..7 {
        let tp = confusion[c][c];
        trace += tp;
        let support: u64 = confusion[c].iter().sum();
        let predicted_c: u64 = (0..7).map(|r| confusion[r][c]).sum();
        let precision = ratio(tp, predicted_c);
        let recall = ratio(tp, support);
        per_class[c] = ClassMetrics {
            precision,
            recall,
            f1: f1_score(precision, recall),
            support,
        };
    }

    let mut macro_avg = AveragedMetrics::default();
    let mut weighted_avg = AveragedMetrics::default();
    for m in &per_class {
        macro_avg.precision += m.precision / 7.0;
        macro_avg.recall += m.recall / 7.0;
        macro_avg.f1 += m.f1 / 7.0;
        let w = m.support as f64 / total as f64;
        weighted_avg.precision += m.precision * w;
        weighted_avg.recall += m.recall * w;
        weighted_avg.f1 += m.f1 * w;
    }

    Ok(MetricsReport {
        per_class,
        accuracy: ratio(trace, total),
        macro_avg,
        weighted_avg,
        confusion,
        total,
    })
}

fn title_case(class: EmotionClass) -> String {
    let name = class.name();
    name[..1].to_uppercase() + &name[1..]
}

impl MetricsReport {
    /// Aligned text table with two-decimal rounding, followed by the confusion matrix.
    pub fn to_table(&self) -> String {
        let r = |x: f64| format!("{:.2}", round_half_up(x, 2));
        let mut s = String::new();
        let _ = writeln!(s, "{:<14}{:>10}{:>10}{:>10}{:>10}", "", "Precision", "Recall", "F1-score", "Support");
        for c in EmotionClass::ALL {
            let m = &self.per_class[c.index()];
            let _ = writeln!(
                s,
                "{:<14}{:>10}{:>10}{:>10}{:>10}",
                title_case(c),
                r(m.precision),
                r(m.recall),
                r(m.f1),
                m.support
            );
        }
        let _ = writeln!(s, "{:<14}{:>10}{:>10}{:>10}{:>10}", "Accuracy", "", "", r(self.accuracy), self.total);
        for (label, avg) in [("Macro avg", &self.macro_avg), ("Weighted avg", &self.weighted_avg)] {
            let _ = writeln!(
                s,
                "{:<14}{:>10}{:>10}{:>10}{:>10}",
                label,
                r(avg.precision),
                r(avg.recall),
                r(avg.f1),
                self.total
            );
        }
        let _ = writeln!(s);
        let _ = write!(s, "{:<14}", "gold\\pred");
        for c in EmotionClass::ALL {
            let _ = write!(s, "{:>10}", c.name());
        }
        let _ = writeln!(s);
        for c in EmotionClass::ALL {
            let _ = write!(s, "{:<14}", c.name());
            for n in &self.confusion[c.index()] {
                let _ = write!(s, "{n:>10}");
            }
            let _ = writeln!(s);
        }
        s
    }

    /// `class,precision,recall,f1,support` rows, full precision.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("class,precision,recall,f1,support\n");
        for c in EmotionClass::ALL {
            let m = &self.per_class[c.index()];
            let _ = writeln!(s, "{},{},{},{},{}", c.name(), m.precision, m.recall, m.f1, m.support);
        }
        let _ = writeln!(s, "accuracy,,,{},{}", self.accuracy, self.total);
        for (label, avg) in [("macro avg", &self.macro_avg), ("weighted avg", &self.weighted_avg)] {
            let _ = writeln!(s, "{label},{},{},{},{}", avg.precision, avg.recall, avg.f1, self.total);
        }
        s
    }
}
