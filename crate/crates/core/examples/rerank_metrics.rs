//! Rerank one user's top-20 by each of the five metrics against their
//! emotion profile.
//!
//!     cargo run --example rerank_metrics -- [userId]

use std::collections::HashSet;

use affectrec::affect::profile_from_history;
use affectrec::corpus::{parse_affect_list, ListFormat, SynonymLexicon};
use affectrec::ingest::{self, build_bundle, MvecSource};
use affectrec::recsys::{top_n_from_seed, train, Hyper};
use affectrec::rerank::{rerank, Metric, DEFAULT_MINKOWSKI_P};
use affectrec::synth::{wordnet_lists, SynthSpec, SynthWorld};
use affectrec::{LexiconClassifier, MovieId, UserId};

fn main() -> affectrec::Result<()> {
    let user = UserId(std::env::args().nth(1).map_or(4, |s| s.parse().expect("userId")));
    let world = SynthWorld::generate(&SynthSpec::default());
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
    let model = train(&bundle.ratings, &Hyper { k: 8, epochs: 30, learning_rate: 0.01, seed: 1, ..Hyper::default() })?;

    let history: Vec<MovieId> = bundle.ratings.iter().filter(|r| r.user == user).map(|r| r.movie).collect();
    let (profile, _) = profile_from_history(user, &history, &bundle.mvecs);
    let profile = profile.ok_or(affectrec::Error::UnknownUser(user))?;
    let seed = *history.iter().rev().find(|m| bundle.mvecs.contains_key(m)).expect("a movie with an mvec");

    let mut exclude: HashSet<MovieId> = history.iter().copied().collect();
    exclude.extend(model.items().iter().filter(|m| !bundle.mvecs.contains_key(m)));
    let mid = top_n_from_seed(&model, seed, 20, &exclude)?;
    let show = |l: &affectrec::RecList| l.movie_ids().take(10).map(|m| format!("{m:>4}")).collect::<String>();
    println!("user {user}, seed movie {seed}, first 10 of 20");
    println!("{:<6}{}", "Mid", show(&mid));
    for metric in Metric::all(DEFAULT_MINKOWSKI_P) {
        println!("{:<6}{}", metric.short_name(), show(&rerank(&mid, &bundle.mvecs, &profile.uvec, metric)?));
    }
    Ok(())
}
