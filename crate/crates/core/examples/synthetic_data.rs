//! Write a complete synthetic input set (ratings, movies, links, overviews,
//! WordNet-Affect lists, labeled corpus) plus a config file.
//!
//!     cargo run --example synthetic_data -- /tmp/affect-demo [users] [seed]
//!     affectrec --config /tmp/affect-demo/affectrec.conf --out /tmp/affect-demo/out build-lexicon

use std::path::PathBuf;

use affectrec::synth::{SynthSpec, SynthWorld};

fn main() -> affectrec::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "synthetic".into()));
    let mut spec = SynthSpec::default();
    if let Some(u) = args.next() {
        spec.users = u.parse().expect("users must be an integer");
    }
    if let Some(s) = args.next() {
        spec.seed = s.parse().expect("seed must be an integer");
    }
    let world = SynthWorld::generate(&spec);
    let paths = world.write_to_dir(&dir)?;
    println!(
        "{} users, {} movies, {} ratings, {} overview rows, {} corpus records",
        spec.users,
        world.catalog.len(),
        world.ratings.len(),
        world.overviews.len(),
        world.corpus.len()
    );
    println!("config: {}", paths.config.display());
    Ok(())
}
