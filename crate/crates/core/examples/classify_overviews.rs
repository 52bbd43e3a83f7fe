//! Turn movie overviews into emotion vectors with the lexicon classifier and
//! show the dominant emotion of each.
//!
//!     cargo run --example classify_overviews

use affectrec::corpus::{parse_affect_list, ListFormat, SynonymLexicon};
use affectrec::emotion::{dominant_emotion, EmotionClassifier, LexiconClassifier};
use affectrec::synth::wordnet_lists;

const OVERVIEWS: &[(&str, &str)] = &[
    ("The Quiet Year", "A widow lives with her grief in a small town, the gloom lifting only with the spring."),
    ("Carnival", "Glee and delight spread through the city when the carnival arrives, bringing cheer to all."),
    ("Blood Oath", "Years of hatred and vengeance boil over into rage between two families."),
    ("The Find", "An archaeologist stumbles on a shock discovery that leaves the team in awe."),
    ("Ledger", "An accountant reviews the quarterly figures."),
];

fn main() -> affectrec::Result<()> {
    let mut lex = SynonymLexicon::new();
    for (class, text) in wordnet_lists() {
        parse_affect_list(&mut lex, class, class.name(), &text, ListFormat::TwoColumn)?;
    }
    let clf = LexiconClassifier::new(&lex, 1.0)?;
    println!("{:<16}{:>9}  mvec (neutral joy sadness hate anger disgust surprise)", "title", "dominant");
    for (title, text) in OVERVIEWS {
        let v = clf.classify(text);
        let cells: Vec<String> = v.weights().iter().map(|w| format!("{w:.3}")).collect();
        println!("{title:<16}{:>9}  {}", dominant_emotion(&v).name(), cells.join(" "));
    }
    Ok(())
}
