//! Deterministic synthetic data in the same file formats as the real inputs.
//!
//! Used by the examples, the integration tests and anyone wanting to run the
//! CLI end to end without downloading MovieLens or WordNet-Affect.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{EmotionClass, LabeledCorpus, LabeledText};
use crate::error::{Error, Result};
use crate::ids::{MovieId, TmdbId, UserId};
use crate::ingest::{self, MovieCatalog, MovieRecord};
use crate::recsys::{RatingEvent, MAX_RATING, MIN_RATING};

/// Emotion words per lexical class, in `EmotionClass::LEXICAL` order.
pub const EMOTION_WORDS: [&[&str]; 6] = [
    &["joy", "happiness", "delight", "glee", "bliss", "cheer", "elation", "merriment", "jubilant"],
    &["sorrow", "grief", "melancholy", "despair", "gloom", "misery", "heartbreak", "mourning", "lonely"],
    &["hatred", "loathing", "enmity", "hostility", "malice", "spite", "animosity", "vengeance", "odium"],
    &["rage", "fury", "wrath", "outrage", "ire", "resentment", "indignation", "temper", "fed up"],
    &["revulsion", "repugnance", "nausea", "distaste", "abhorrence", "repulsion", "sickening", "filth", "gross out"],
    &["astonishment", "amazement", "shock", "wonder", "startle", "bewilderment", "awe", "stupefaction", "unexpected"],
];

const FILLER: &[&str] = &[
    "a", "young", "family", "city", "journey", "secret", "friend", "night", "town", "discovers", "war",
    "detective", "old", "house", "island", "brother", "sister", "mission", "letter", "winter", "road",
    "the", "of", "and", "in", "with", "their", "after", "before", "must", "find", "home",
];

const GENRES: &[&str] = &[
    "Action", "Adventure", "Animation", "Comedy", "Crime", "Drama", "Fantasy", "Horror", "Mystery",
    "Romance", "Sci-Fi", "Thriller", "War", "Western",
];

fn words(class: EmotionClass) -> &'static [&'static str] {
    EMOTION_WORDS[class.index() - 1]
}

/// Size and seed of a synthetic world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub users: u32,
    pub movies: u32,
    pub min_ratings: usize,
    pub max_ratings: usize,
    /// Records per class in the labeled corpus.
    pub corpus_per_class: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            users: 20,
            movies: 120,
            min_ratings: 12,
            max_ratings: 40,
            corpus_per_class: 60,
            seed: 7,
        }
    }
}

/// Everything the pipeline reads, generated in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthWorld {
    /// `(class, file content)` for the six WordNet-Affect lists.
    pub wordnet: Vec<(EmotionClass, String)>,
    pub catalog: MovieCatalog,
    pub overviews: Vec<(TmdbId, String, String)>,
    pub ratings: Vec<RatingEvent>,
    pub corpus: LabeledCorpus,
}

/// Paths written by [`SynthWorld::write_to_dir`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthPaths {
    pub wordnet_dir: PathBuf,
    pub movies: PathBuf,
    pub links: PathBuf,
    pub overviews: PathBuf,
    pub ratings: PathBuf,
    pub corpus: PathBuf,
    /// A config file wiring all of the above.
    pub config: PathBuf,
}

/// WordNet-Affect style lists: `n#<offset> <term>`, multiword terms joined
/// by underscores, one repeated term per list.
pub fn wordnet_lists() -> Vec<(EmotionClass, String)> {
    EmotionClass::LEXICAL
        .into_iter()
        .map(|c| {
            let mut s = String::new();
            for (i, w) in words(c).iter().enumerate() {
                s.push_str(&format!("n#{:08} {}\n", 7_000_000 + c.index() * 1000 + i, w.replace(' ', "_")));
            }
            s.push_str(&format!("n#{:08} {}\n", 7_000_999 + c.index() * 1000, words(c)[0]));
            (c, s)
        })
        .collect()
}

fn filler_words(rng: &mut impl Rng, n: usize, out: &mut Vec<String>) {
    for _ in 0..n {
        out.push(FILLER.choose(rng).expect("non-empty").to_string());
    }
}

/// A sentence-like text with `strength` words of `class` (none for neutral)
/// and occasional noise from another class.
fn emotive_text(rng: &mut impl Rng, class: EmotionClass, strength: usize) -> String {
    let mut toks = Vec::new();
    let n = rng.random_range(6..14);
    filler_words(rng, n, &mut toks);
    if class != EmotionClass::Neutral {
        for _ in 0..strength {
            toks.push(words(class).choose(rng).expect("non-empty").to_string());
        }
    }
    if rng.random_bool(0.3) {
        let other = *EmotionClass::LEXICAL.choose(rng).expect("non-empty");
        toks.push(words(other).choose(rng).expect("non-empty").to_string());
    }
    toks.shuffle(rng);
    let mut s = toks.join(" ");
    s.push('.');
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => s,
    }
}

/// A labeled corpus with `counts[i]` records of class `i`, grouped by class.
pub fn labeled_corpus(counts: [usize; 7], seed: u64) -> LabeledCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(counts.iter().sum());
    for class in EmotionClass::ALL {
        for _ in 0..counts[class.index()] {
            let strength = rng.random_range(1..3);
            records.push(LabeledText {
                text: emotive_text(&mut rng, class, strength),
                label: class,
            });
        }
    }
    LabeledCorpus::new(records)
}

/// Observed entries of a rank-2 rating matrix `3 + a_u . b_i + noise`,
/// clamped to the rating scale, each cell present with probability `density`.
pub fn rank2_ratings(users: u32, items: u32, density: f64, sigma: f64, seed: u64) -> Vec<RatingEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factor = Normal::new(0.0, 0.8).expect("valid");
    let noise = Normal::new(0.0, sigma).expect("valid");
    let a: Vec<[f64; 2]> = (0..users).map(|_| [factor.sample(&mut rng), factor.sample(&mut rng)]).collect();
    let b: Vec<[f64; 2]> = (0..items).map(|_| [factor.sample(&mut rng), factor.sample(&mut rng)]).collect();
    let mut out = Vec::new();
    for u in 0..users {
        for i in 0..items {
            if !rng.random_bool(density) {
                continue;
            }
            let (au, bi) = (a[u as usize], b[i as usize]);
            let r = (3.0 + au[0] * bi[0] + au[1] * bi[1] + noise.sample(&mut rng)).clamp(MIN_RATING, MAX_RATING);
            let ts = 1_000_000_000 + (u as i64) * 100_000 + i as i64;
            out.push(RatingEvent::new(UserId(u + 1), MovieId(i + 1), r, ts).expect("clamped"));
        }
    }
    out
}

impl SynthWorld {
    pub fn generate(spec: &SynthSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

        // Movies: ids are sparse like MovieLens; every 13th has no overview
        // row and every 29th has no tmdbId.
        let mut catalog = MovieCatalog::new();
        let mut overviews = Vec::new();
        let mut moods = Vec::new();
        for i in 1..=spec.movies {
            let id = MovieId(i * 7 + (i % 3));
            let mood = EmotionClass::from_index(rng.random_range(0..7)).expect("in range");
            let title = format!("Synthetic Feature {i} ({})", 1950 + rng.random_range(0..70));
            let tmdb = (i % 29 != 0).then_some(TmdbId(100_000 + i));
            let genres: BTreeSet<&str> = (0..rng.random_range(1..4))
                .map(|_| *GENRES.choose(&mut rng).expect("non-empty"))
                .collect();
            if let Some(t) = tmdb {
                if i % 13 != 0 {
                    let strength = rng.random_range(2..6);
                    overviews.push((t, title.clone(), emotive_text(&mut rng, mood, strength)));
                }
            }
            moods.push((id, mood));
            catalog.insert(
                id,
                MovieRecord {
                    movie_id: id,
                    title,
                    genres: genres.into_iter().map(str::to_string).collect(),
                    imdb_id: Some(format!("{:07}", 100_000 + i * 11)),
                    tmdb_id: tmdb,
                    overview: None,
                },
            );
        }
        // An overview row nobody links to, as in real scrapes.
        overviews.push((TmdbId(999_999), "Unlinked".into(), "A stray record.".into()));

        // Users: two latent taste dimensions plus a favourite mood that makes
        // matching movies more likely to be watched and liked.
        let taste = Normal::new(0.0, 0.7).expect("valid");
        let item_f: Vec<[f64; 2]> = moods.iter().map(|_| [taste.sample(&mut rng), taste.sample(&mut rng)]).collect();
        let mut ratings = Vec::new();
        for u in 1..=spec.users {
            let fav = EmotionClass::from_index(rng.random_range(0..7)).expect("in range");
            let uf = [taste.sample(&mut rng), taste.sample(&mut rng)];
            let n = rng.random_range(spec.min_ratings..=spec.max_ratings).min(moods.len());
            let mut pool: Vec<usize> = (0..moods.len()).collect();
            pool.shuffle(&mut rng);
            let keys: Vec<u8> = (0..moods.len())
                .map(|j| (moods[j].1 != fav) as u8 * rng.random_range(1..4u8))
                .collect();
            pool.sort_by_key(|&j| keys[j]);
            let mut ts = 1_100_000_000 + u as i64 * 3_600;
            for &j in pool.iter().take(n) {
                ts += rng.random_range(60..86_400);
                let bonus = if moods[j].1 == fav { 0.8 } else { 0.0 };
                let raw = 3.0 + uf[0] * item_f[j][0] + uf[1] * item_f[j][1] + bonus + rng.random_range(-0.5..0.5);
                let rating = ((raw * 2.0).round() / 2.0).clamp(MIN_RATING, MAX_RATING);
                ratings.push(RatingEvent::new(UserId(u), moods[j].0, rating, ts).expect("clamped"));
            }
        }
        ingest::sort_ratings(&mut ratings);

        let corpus = labeled_corpus([spec.corpus_per_class; 7], spec.seed.wrapping_add(1));
        SynthWorld {
            wordnet: wordnet_lists(),
            catalog,
            overviews,
            ratings,
            corpus,
        }
    }

    /// Write every input file plus `affectrec.conf` under `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<SynthPaths> {
        let wordnet_dir = dir.join("wordnet");
        fs::create_dir_all(&wordnet_dir).map_err(|e| Error::io(&wordnet_dir, e))?;
        for (class, text) in &self.wordnet {
            let p = wordnet_dir.join(format!("{}.txt", class.name()));
            fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
        }
        let paths = SynthPaths {
            movies: dir.join("movies.csv"),
            links: dir.join("links.csv"),
            overviews: dir.join("overviews.csv"),
            ratings: dir.join("ratings.csv"),
            corpus: dir.join("corpus.csv"),
            config: dir.join("affectrec.conf"),
            wordnet_dir,
        };
        let (mut mb, mut lb, mut ob, mut rb, mut cb) = (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
        ingest::write_movies_and_links(&self.catalog, &mut mb, &mut lb)?;
        ingest::write_overviews(&mut ob, &self.overviews)?;
        ingest::write_ratings(&mut rb, &self.ratings)?;
        self.corpus.write_csv(&mut cb)?;
        let per_class = self.corpus.class_counts().into_iter().min().unwrap_or(0);
        let conf = format!(
            "# synthetic dataset\nratings = {}\nmovies = {}\nlinks = {}\noverviews = {}\nwordnet_dir = {}\ncorpus = {}\nper_class = {}\nk = 8\nepochs = 30\nlearning_rate = 0.01\n",
            paths.ratings.display(),
            paths.movies.display(),
            paths.links.display(),
            paths.overviews.display(),
            paths.wordnet_dir.display(),
            paths.corpus.display(),
            per_class,
        );
        for (p, bytes) in [
            (&paths.movies, mb),
            (&paths.links, lb),
            (&paths.overviews, ob),
            (&paths.ratings, rb),
            (&paths.corpus, cb),
            (&paths.config, conf.into_bytes()),
        ] {
            fs::write(p, bytes).map_err(|e| Error::io(p, e))?;
        }
        Ok(paths)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let spec = SynthSpec::default();
        assert_eq!(SynthWorld::generate(&spec), SynthWorld::generate(&spec));
        let other = SynthSpec { seed: 8, ..spec };
        assert_ne!(SynthWorld::generate(&spec).ratings, SynthWorld::generate(&other).ratings);
    }

    #[test]
    fn ratings_are_valid_and_sorted() {
        let w = SynthWorld::generate(&SynthSpec::default());
        assert!(w.ratings.iter().all(|r| w.catalog.contains_key(&r.movie)));
        assert!(w.ratings.windows(2).all(|p| (p[0].user, p[0].timestamp) < (p[1].user, p[1].timestamp)));
    }

    #[test]
    fn corpus_counts() {
        let c = labeled_corpus([3, 1, 4, 1, 5, 9, 2], 0);
        assert_eq!(c.class_counts(), [3, 1, 4, 1, 5, 9, 2]);
    }

    #[test]
    fn rank2_density() {
        let r = rank2_ratings(100, 50, 0.2, 0.1, 1);
        let frac = r.len() as f64 / 5000.0;
        assert!((frac - 0.2).abs() < 0.03, "{frac}");
    }
}
