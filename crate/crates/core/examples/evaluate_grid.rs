//! The full hit-rate grid: every user, nine chronological splits, top-20
//! and its top-5/top-10 prefixes, the recommender list and five reranked
//! lists.
//!
//!     cargo run --release --example evaluate_grid -- [users]

use affectrec::corpus::{parse_affect_list, ListFormat, SynonymLexicon};
use affectrec::eval::{pick_winner, run_experiment, EvalSettings};
use affectrec::ingest::{self, build_bundle, MvecSource};
use affectrec::recsys::{train, Hyper};
use affectrec::synth::{wordnet_lists, SynthSpec, SynthWorld};
use affectrec::LexiconClassifier;

fn main() -> affectrec::Result<()> {
    let users = std::env::args().nth(1).map_or(50, |s| s.parse().expect("users"));
    let world = SynthWorld::generate(&SynthSpec { users, ..SynthSpec::default() });
    let mut lex = SynonymLexicon::new();
    for (class, text) in wordnet_lists() {
        parse_affect_list(&mut lex, class, class.name(), &text, ListFormat::TwoColumn)?;
    }
    let clf = LexiconClassifier::new(&lex, 1.0)?;
    let mut catalog = world.catalog.clone();
    let mut buf = Vec::new();
    ingest::write_overviews(&mut buf, &world.overviews)?;
    ingest::attach_overviews(&mut catalog, buf.as_slice(), "overviews")?;
    let bundle = build_bundle(world.ratings.clone(), catalog, MvecSource::Classifier(&clf))?;
    println!("{}", bundle.coverage);

    let model = train(&bundle.ratings, &Hyper { k: 8, epochs: 30, learning_rate: 0.01, seed: 1, ..Hyper::default() })?;
    let report = run_experiment(&bundle, &model, &EvalSettings::default())?;
    print!("{}", report.to_table());
    println!("winner: {}", pick_winner(&report).label());
    Ok(())
}
