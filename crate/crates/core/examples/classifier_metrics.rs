//! Precision, recall, F1 and the confusion matrix of the lexicon classifier
//! on a balanced synthetic corpus, after the same balance-then-split
//! preparation used for real tweet corpora.
//!
//!     cargo run --example classifier_metrics

use affectrec::corpus::{balance_corpus, parse_affect_list, split_corpus, ListFormat, SynonymLexicon};
use affectrec::emotion::{dominant_emotion, evaluate_classifier, f1_score, round_half_up, EmotionClassifier, LexiconClassifier};
use affectrec::synth::{labeled_corpus, wordnet_lists};

fn main() -> affectrec::Result<()> {
    let mut lex = SynonymLexicon::new();
    for (class, text) in wordnet_lists() {
        parse_affect_list(&mut lex, class, class.name(), &text, ListFormat::TwoColumn)?;
    }
    let clf = LexiconClassifier::new(&lex, 1.0)?;

    let raw = labeled_corpus([400, 900, 600, 500, 300, 350, 250], 3);
    let balanced = balance_corpus(&raw, 250, 1)?;
    let (_train, test) = split_corpus(&balanced, 0.8, 2)?;
    let gold: Vec<_> = test.records.iter().map(|r| r.label).collect();
    let pred: Vec<_> = test.records.iter().map(|r| dominant_emotion(&clf.classify(&r.text))).collect();
    println!("{}", evaluate_classifier(&pred, &gold)?.to_table());

    // F1 from published two-decimal precision/recall pairs
    for (p, r) in [(0.47, 0.77), (0.66, 0.51), (0.71, 0.59)] {
        println!("p={p:.2} r={r:.2} -> f1={:.4} (~{:.2})", f1_score(p, r), round_half_up(f1_score(p, r), 2));
    }
    Ok(())
}
