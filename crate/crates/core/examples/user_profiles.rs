//! Build user emotion profiles from watch histories, in batch and
//! incrementally, and show that both agree.
//!
//!     cargo run --example user_profiles

use affectrec::affect::{profile_from_history, update_uvec, write_uvec_csv, UserProfile};
use affectrec::corpus::{parse_affect_list, ListFormat, SynonymLexicon};
use affectrec::ingest::{self, build_bundle, MvecSource};
use affectrec::synth::{wordnet_lists, SynthSpec, SynthWorld};
use affectrec::{EmotionClass, LexiconClassifier, UserId};

fn main() -> affectrec::Result<()> {
    let world = SynthWorld::generate(&SynthSpec { users: 5, ..SynthSpec::default() });
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

    let mut profiles = Vec::new();
    for u in 1..=5 {
        let user = UserId(u);
        let history: Vec<_> = bundle.ratings.iter().filter(|r| r.user == user).map(|r| r.movie).collect();
        let (batch, excluded) = profile_from_history(user, &history, &bundle.mvecs);
        let batch = batch.expect("synthetic users watch movies with overviews");

        // replay the history one movie at a time
        let mut inc: Option<UserProfile> = None;
        for m in &history {
            if let Some(v) = bundle.mvecs.get(m) {
                inc = Some(match inc {
                    None => UserProfile::from_mvecs(user, &[*v])?,
                    Some(p) => update_uvec(&p, v),
                });
            }
        }
        let inc = inc.expect("non-empty");
        let gap = batch
            .uvec
            .weights()
            .iter()
            .zip(inc.uvec.weights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let top = EmotionClass::ALL
            .into_iter()
            .max_by(|a, b| batch.uvec[*a].total_cmp(&batch.uvec[*b]))
            .expect("seven classes");
        println!(
            "user {u}: {} movies ({excluded} without mvec), strongest {top}, batch/incremental gap {gap:.1e}",
            batch.watch_count
        );
        profiles.push(batch);
    }
    let mut csv = Vec::new();
    write_uvec_csv(&mut csv, &profiles)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
