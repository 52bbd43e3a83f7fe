//! Parse WordNet-Affect style emotion lists into a deduplicated, sorted
//! synonym lexicon and print the per-emotion term counts.
//!
//!     cargo run --example build_lexicon -- [wordnet_dir]
//!
//! Without an argument the bundled synthetic lists are used.

use std::path::PathBuf;

use affectrec::corpus::{parse_affect_list, parse_wordnet_affect_dir, EmotionClass, ListFormat, SynonymLexicon};
use affectrec::synth::wordnet_lists;

fn main() -> affectrec::Result<()> {
    let lex = match std::env::args().nth(1) {
        Some(dir) => parse_wordnet_affect_dir(&PathBuf::from(dir), ListFormat::MultiTerm)?,
        None => {
            let mut lex = SynonymLexicon::new();
            for (class, text) in wordnet_lists() {
                parse_affect_list(&mut lex, class, class.name(), &text, ListFormat::TwoColumn)?;
            }
            lex
        }
    };
    for class in EmotionClass::LEXICAL {
        let terms: Vec<&str> = lex.terms(class).iter().map(String::as_str).take(5).collect();
        println!("{:<9}{:>5}  {} ...", class.name(), lex.len(class), terms.join(", "));
    }
    println!("{:<9}{:>5}", "total", lex.total_len());
    Ok(())
}
