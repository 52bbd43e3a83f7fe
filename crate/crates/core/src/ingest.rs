//! Loading MovieLens-format files and TMDb-style overviews.
//!
//! Expected layouts (ml-latest-small conventions, UTF-8, RFC-4180 quoting):
//!
//! - ratings: `userId,movieId,rating,timestamp`
//! - movies: `movieId,title,genres` (genres pipe-separated)
//! - links: `movieId,imdbId,tmdbId` (tmdbId may be blank)
//! - overviews: `tmdbId,title,overview`

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use log::warn;
use rayon::prelude::*;

use crate::emotion::{EmotionClassifier, EmotionVector};
use crate::error::{Error, Result};
use crate::ids::{MovieId, TmdbId, UserId};
use crate::recsys::RatingEvent;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MovieRecord {
    pub movie_id: MovieId,
    pub title: String,
    pub genres: Vec<String>,
    /// Kept verbatim (leading zeros matter).
    pub imdb_id: Option<String>,
    pub tmdb_id: Option<TmdbId>,
    pub overview: Option<String>,
}

pub type MovieCatalog = BTreeMap<MovieId, MovieRecord>;

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| Error::io(path, e))
}

fn check_header(rdr: &mut csv::Reader<impl Read>, file: &str, expected: &[&str]) -> Result<()> {
    let headers = rdr.headers().map_err(|e| Error::csv(file, e))?;
    if headers.iter().map(str::trim).collect::<Vec<_>>() != expected {
        return Err(Error::parse(file, 1, format!("expected header `{}`", expected.join(","))));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, file: &str, name: &str) -> Result<T> {
    let line = rec.position().map_or(0, |p| p.line());
    let raw = rec.get(i).unwrap_or("");
    raw.trim()
        .parse()
        .map_err(|_| Error::parse(file, line, format!("bad {name} {raw:?}")))
}

/// Ratings sorted by `(userId, timestamp, movieId)`.
pub fn load_ratings<R: Read>(reader: R, file: &str) -> Result<Vec<RatingEvent>> {
    let mut rdr = csv::Reader::from_reader(reader);
    check_header(&mut rdr, file, &["userId", "movieId", "rating", "timestamp"])?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::csv(file, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let user: UserId = field(&rec, 0, file, "userId")?;
        let movie: MovieId = field(&rec, 1, file, "movieId")?;
        let rating: f64 = field(&rec, 2, file, "rating")?;
        let timestamp: i64 = field(&rec, 3, file, "timestamp")?;
        let ev = RatingEvent::new(user, movie, rating, timestamp)
            .map_err(|e| Error::parse(file, line, e.to_string()))?;
        out.push(ev);
    }
    sort_ratings(&mut out);
    Ok(out)
}

pub fn load_ratings_path(path: &Path) -> Result<Vec<RatingEvent>> {
    load_ratings(open(path)?, &path.display().to_string())
}

pub fn sort_ratings(ratings: &mut [RatingEvent]) {
    ratings.sort_by(|a, b| {
        (a.user, a.timestamp, a.movie)
            .cmp(&(b.user, b.timestamp, b.movie))
            .then(a.rating.total_cmp(&b.rating))
    });
}

pub fn write_ratings<W: Write>(writer: W, ratings: &[RatingEvent]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let err = |e| Error::csv("ratings", e);
    wtr.write_record(["userId", "movieId", "rating", "timestamp"]).map_err(err)?;
    for r in ratings {
        wtr.write_record([
            r.user.to_string(),
            r.movie.to_string(),
            format!("{:.1}", r.rating),
            r.timestamp.to_string(),
        ])
        .map_err(err)?;
    }
    wtr.flush().map_err(|e| Error::io("ratings", e))
}

/// Counts reported while joining links.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LinkStats {
    pub unknown_movie: usize,
    pub duplicate_tmdb: usize,
}

/// Join movies and links. Link rows naming an unknown movie are skipped with
/// a warning; a tmdbId already linked to another movie is dropped likewise.
pub fn load_movies_and_links<M: Read, L: Read>(
    movies: M,
    movies_file: &str,
    links: L,
    links_file: &str,
) -> Result<(MovieCatalog, LinkStats)> {
    let mut catalog = MovieCatalog::new();
    let mut rdr = csv::Reader::from_reader(movies);
    check_header(&mut rdr, movies_file, &["movieId", "title", "genres"])?;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::csv(movies_file, e))?;
        let id: MovieId = field(&rec, 0, movies_file, "movieId")?;
        let genres = rec
            .get(2)
            .unwrap_or("")
            .split('|')
            .map(str::trim)
            .filter(|g| !g.is_empty())
            .map(str::to_string)
            .collect();
        let record = MovieRecord {
            movie_id: id,
            title: rec.get(1).unwrap_or("").to_string(),
            genres,
            imdb_id: None,
            tmdb_id: None,
            overview: None,
        };
        if catalog.insert(id, record).is_some() {
            return Err(Error::DuplicateKey(format!("movieId {id} in {movies_file}")));
        }
    }

    let mut stats = LinkStats::default();
    let mut tmdb_owner: HashMap<TmdbId, MovieId> = HashMap::new();
    let mut rdr = csv::Reader::from_reader(links);
    check_header(&mut rdr, links_file, &["movieId", "imdbId", "tmdbId"])?;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::csv(links_file, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let id: MovieId = field(&rec, 0, links_file, "movieId")?;
        let Some(movie) = catalog.get_mut(&id) else {
            warn!("{links_file}:{line}: link for unknown movie {id} skipped");
            stats.unknown_movie += 1;
            continue;
        };
        let imdb = rec.get(1).unwrap_or("").trim();
        movie.imdb_id = (!imdb.is_empty()).then(|| imdb.to_string());
        if rec.get(2).unwrap_or("").trim().is_empty() {
            continue;
        }
        let tmdb: TmdbId = field(&rec, 2, links_file, "tmdbId")?;
        if let Some(owner) = tmdb_owner.get(&tmdb) {
            warn!("{links_file}:{line}: tmdbId {tmdb} already linked to movie {owner}; dropped for movie {id}");
            stats.duplicate_tmdb += 1;
            continue;
        }
        tmdb_owner.insert(tmdb, id);
        movie.tmdb_id = Some(tmdb);
    }
    Ok((catalog, stats))
}

pub fn load_movies_and_links_paths(movies: &Path, links: &Path) -> Result<(MovieCatalog, LinkStats)> {
    load_movies_and_links(
        open(movies)?,
        &movies.display().to_string(),
        open(links)?,
        &links.display().to_string(),
    )
}

/// Write `movies.csv` and `links.csv` contents for a catalog.
pub fn write_movies_and_links<M: Write, L: Write>(catalog: &MovieCatalog, movies: M, links: L) -> Result<()> {
    let mut mw = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(movies);
    let mut lw = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(links);
    let merr = |e| Error::csv("movies", e);
    let lerr = |e| Error::csv("links", e);
    mw.write_record(["movieId", "title", "genres"]).map_err(merr)?;
    lw.write_record(["movieId", "imdbId", "tmdbId"]).map_err(lerr)?;
    for m in catalog.values() {
        mw.write_record([m.movie_id.to_string(), m.title.clone(), m.genres.join("|")])
            .map_err(merr)?;
        lw.write_record([
            m.movie_id.to_string(),
            m.imdb_id.clone().unwrap_or_default(),
            m.tmdb_id.map(|t| t.to_string()).unwrap_or_default(),
        ])
        .map_err(lerr)?;
    }
    mw.flush().map_err(|e| Error::io("movies", e))?;
    lw.flush().map_err(|e| Error::io("links", e))
}

/// Result of attaching overviews to a catalog.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OverviewCoverage {
    pub movies: usize,
    pub with_overview: usize,
    /// Overview rows whose tmdbId no catalog movie links to.
    pub unmatched_rows: usize,
    pub duplicate_rows: usize,
}

/// Attach overviews by tmdbId. Blank overviews count as absent; for a
/// repeated tmdbId the first row wins.
pub fn attach_overviews<R: Read>(catalog: &mut MovieCatalog, reader: R, file: &str) -> Result<OverviewCoverage> {
    let by_tmdb: HashMap<TmdbId, MovieId> = catalog
        .values()
        .filter_map(|m| m.tmdb_id.map(|t| (t, m.movie_id)))
        .collect();
    let mut rdr = csv::Reader::from_reader(reader);
    // a zero-byte file is an empty scrape, not a malformed one
    let empty = rdr.headers().map_err(|e| Error::csv(file, e))?.is_empty();
    if !empty {
        check_header(&mut rdr, file, &["tmdbId", "title", "overview"])?;
    }
    let mut seen = BTreeSet::new();
    let mut cov = OverviewCoverage::default();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::csv(file, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let tmdb: TmdbId = field(&rec, 0, file, "tmdbId")?;
        if !seen.insert(tmdb) {
            warn!("{file}:{line}: duplicate tmdbId {tmdb}, keeping the first row");
            cov.duplicate_rows += 1;
            continue;
        }
        let Some(movie) = by_tmdb.get(&tmdb) else {
            cov.unmatched_rows += 1;
            continue;
        };
        let text = rec.get(2).unwrap_or("").trim();
        if !text.is_empty() {
            catalog.get_mut(movie).expect("indexed above").overview = Some(text.to_string());
        }
    }
    cov.movies = catalog.len();
    cov.with_overview = catalog.values().filter(|m| m.overview.is_some()).count();
    Ok(cov)
}

pub fn attach_overviews_path(catalog: &mut MovieCatalog, path: &Path) -> Result<OverviewCoverage> {
    attach_overviews(catalog, open(path)?, &path.display().to_string())
}

pub fn write_overviews<W: Write>(writer: W, rows: &[(TmdbId, String, String)]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let err = |e| Error::csv("overviews", e);
    wtr.write_record(["tmdbId", "title", "overview"]).map_err(err)?;
    for (t, title, text) in rows {
        wtr.write_record([t.to_string(), title.clone(), text.clone()]).map_err(err)?;
    }
    wtr.flush().map_err(|e| Error::io("overviews", e))
}

/// Where movie emotion vectors come from.
pub enum MvecSource<'a> {
    /// Classify each movie's overview.
    Classifier(&'a dyn EmotionClassifier),
    /// Vectors computed elsewhere, keyed by movieId.
    Precomputed(BTreeMap<MovieId, EmotionVector>),
}

/// Classify every movie that has an overview.
pub fn classify_catalog(catalog: &MovieCatalog, clf: &dyn EmotionClassifier) -> BTreeMap<MovieId, EmotionVector> {
    let with_text: Vec<(&MovieId, &String)> = catalog
        .iter()
        .filter_map(|(id, m)| m.overview.as_ref().map(|o| (id, o)))
        .collect();
    with_text
        .par_iter()
        .map(|(id, text)| (**id, clf.classify(text)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Dataset size summary.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Coverage {
    pub users: usize,
    pub ratings: usize,
    pub movies: usize,
    /// Movies carrying an emotion vector.
    pub overviews: usize,
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "users={} ratings={} movies={} overviews={}",
            self.users, self.ratings, self.movies, self.overviews
        )
    }
}

/// Ratings, catalog and mvecs, referentially consistent.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub movies: MovieCatalog,
    /// Sorted by `(userId, timestamp, movieId)`.
    pub ratings: Vec<RatingEvent>,
    pub mvecs: BTreeMap<MovieId, EmotionVector>,
    pub coverage: Coverage,
    /// Ratings dropped because their movie is not in the catalog.
    pub dropped_ratings: usize,
    /// Precomputed vectors dropped because their movie is not in the catalog.
    pub dropped_mvecs: usize,
}

pub fn build_bundle(ratings: Vec<RatingEvent>, movies: MovieCatalog, source: MvecSource<'_>) -> Result<DatasetBundle> {
    let before = ratings.len();
    let mut ratings: Vec<RatingEvent> = ratings.into_iter().filter(|r| movies.contains_key(&r.movie)).collect();
    let dropped_ratings = before - ratings.len();
    if dropped_ratings > 0 {
        warn!("{dropped_ratings} ratings reference unknown movies and were dropped");
    }
    if ratings.is_empty() {
        return Err(Error::Empty("ratings after dropping unknown movies"));
    }
    sort_ratings(&mut ratings);

    let (mvecs, dropped_mvecs) = match source {
        MvecSource::Classifier(clf) => (classify_catalog(&movies, clf), 0),
        MvecSource::Precomputed(all) => {
            let n = all.len();
            let kept: BTreeMap<_, _> = all.into_iter().filter(|(m, _)| movies.contains_key(m)).collect();
            let dropped = n - kept.len();
            (kept, dropped)
        }
    };

    let coverage = Coverage {
        users: ratings.iter().map(|r| r.user).collect::<BTreeSet<_>>().len(),
        ratings: ratings.len(),
        movies: movies.len(),
        overviews: mvecs.len(),
    };
    Ok(DatasetBundle {
        movies,
        ratings,
        mvecs,
        coverage,
        dropped_ratings,
        dropped_mvecs,
    })
}

impl DatasetBundle {
    /// Full scan of the referential invariants.
    pub fn check_integrity(&self) -> Result<()> {
        for r in &self.ratings {
            if !self.movies.contains_key(&r.movie) {
                return Err(Error::InvalidParameter(format!("rating for unknown movie {}", r.movie)));
            }
        }
        for m in self.mvecs.keys() {
            if !self.movies.contains_key(m) {
                return Err(Error::InvalidParameter(format!("mvec for unknown movie {m}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{EmotionClass, SynonymLexicon};
    use crate::emotion::LexiconClassifier;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const MOVIES: &str = "movieId,title,genres\n\
        44665,Lucky Number Slevin (2006),Crime|Drama|Mystery\n\
        858,\"Godfather, The (1972)\",Crime|Drama\n\
        1,Toy Story (1995),Adventure|Animation\n";
    const LINKS: &str = "movieId,imdbId,tmdbId\n44665,0425210,186\n858,0068646,238\n1,0114709,\n999,0000001,5\n";

    #[test]
    fn parses_table_eight_row() {
        let r = load_ratings("userId,movieId,rating,timestamp\n400,44665,4.0,1498870148\n".as_bytes(), "mem").unwrap();
        assert_eq!(r, vec![RatingEvent::new(UserId(400), MovieId(44665), 4.0, 1498870148).unwrap()]);
        assert!(load_ratings("userId,movieId,rating,timestamp\n".as_bytes(), "mem").unwrap().is_empty());
    }

    #[test]
    fn rating_errors_carry_row() {
        for bad in [
            "userId,movieId,rating,timestamp\n1,2,3.0,4\n1,2,x,4\n",
            "userId,movieId,rating,timestamp\n1,2,3.0,4\n1,2,5.5,4\n",
        ] {
            match load_ratings(bad.as_bytes(), "r.csv").unwrap_err() {
                Error::Parse { line, .. } => assert_eq!(line, 3),
                other => panic!("unexpected {other:?}"),
            }
        }
        assert!(load_ratings("movieId,userId,rating,timestamp\n".as_bytes(), "r.csv").is_err());
        assert!(load_ratings("".as_bytes(), "r.csv").is_err());
    }

    #[test]
    fn thousand_row_checksums() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000);
        let mut text = String::from("userId,movieId,rating,timestamp\n");
        let (mut su, mut sm, mut sr, mut st) = (0u64, 0u64, 0.0f64, 0i64);
        for _ in 0..1000 {
            let (u, m) = (rng.random_range(1..700u32), rng.random_range(1..200_000u32));
            let r = rng.random_range(1..=10) as f64 * 0.5;
            let t = rng.random_range(800_000_000..1_700_000_000i64);
            su += u as u64;
            sm += m as u64;
            sr += r;
            st += t;
            text.push_str(&format!("{u},{m},{r:.1},{t}\n"));
        }
        let ratings = load_ratings(text.as_bytes(), "mem").unwrap();
        assert_eq!(ratings.len(), 1000);
        assert_eq!(ratings.iter().map(|r| r.user.0 as u64).sum::<u64>(), su);
        assert_eq!(ratings.iter().map(|r| r.movie.0 as u64).sum::<u64>(), sm);
        assert_eq!(ratings.iter().map(|r| r.rating).sum::<f64>(), sr);
        assert_eq!(ratings.iter().map(|r| r.timestamp).sum::<i64>(), st);
        assert!(ratings.windows(2).all(|w| (w[0].user, w[0].timestamp) <= (w[1].user, w[1].timestamp)));
    }

    #[test]
    fn shuffled_rows_load_identically() {
        let rows = ["3,10,4.0,5", "1,11,3.5,9", "1,12,2.0,1", "2,10,5.0,7", "1,10,1.0,9"];
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let load = |rows: &[&str]| load_ratings(format!("userId,movieId,rating,timestamp\n{}\n", rows.join("\n")).as_bytes(), "m").unwrap();
        let a = load(&rows);
        for _ in 0..10 {
            let mut s = rows.to_vec();
            s.shuffle(&mut rng);
            assert_eq!(load(&s), a);
        }
    }

    #[test]
    fn joins_movies_and_links() {
        let (cat, stats) = load_movies_and_links(MOVIES.as_bytes(), "movies", LINKS.as_bytes(), "links").unwrap();
        let slevin = &cat[&MovieId(44665)];
        assert_eq!(slevin.title, "Lucky Number Slevin (2006)");
        assert_eq!(slevin.genres, ["Crime", "Drama", "Mystery"]);
        assert_eq!(slevin.tmdb_id, Some(TmdbId(186)));
        assert_eq!(cat[&MovieId(858)].title, "Godfather, The (1972)");
        assert_eq!(cat[&MovieId(1)].tmdb_id, None);
        assert_eq!(stats.unknown_movie, 1);
    }

    #[test]
    fn duplicate_movie_is_an_error() {
        let movies = "movieId,title,genres\n1,A,X\n1,B,Y\n";
        assert!(matches!(
            load_movies_and_links(movies.as_bytes(), "m", "movieId,imdbId,tmdbId\n".as_bytes(), "l"),
            Err(Error::DuplicateKey(_))
        ));
    }

    #[test]
    fn duplicate_tmdb_link_dropped() {
        let links = "movieId,imdbId,tmdbId\n44665,1,186\n858,2,186\n";
        let (cat, stats) = load_movies_and_links(MOVIES.as_bytes(), "m", links.as_bytes(), "l").unwrap();
        assert_eq!(stats.duplicate_tmdb, 1);
        assert_eq!(cat[&MovieId(858)].tmdb_id, None);
    }

    #[test]
    fn catalog_round_trip() {
        let (cat, _) = load_movies_and_links(MOVIES.as_bytes(), "m", LINKS.as_bytes(), "l").unwrap();
        let (mut mb, mut lb) = (Vec::new(), Vec::new());
        write_movies_and_links(&cat, &mut mb, &mut lb).unwrap();
        let (back, stats) = load_movies_and_links(mb.as_slice(), "m", lb.as_slice(), "l").unwrap();
        assert_eq!(back, cat);
        assert_eq!(stats, LinkStats::default());
    }

    fn synthetic_catalog(n: u32) -> MovieCatalog {
        (1..=n)
            .map(|i| {
                (
                    MovieId(i),
                    MovieRecord {
                        movie_id: MovieId(i),
                        title: format!("Movie {i}"),
                        genres: vec!["Drama".into()],
                        imdb_id: None,
                        tmdb_id: Some(TmdbId(i + 10_000)),
                        overview: None,
                    },
                )
            })
            .collect()
    }

    #[test]
    fn coverage_with_known_gaps() {
        let mut cat = synthetic_catalog(50);
        let gaps = [3u32, 9, 17, 22, 30, 41, 50];
        let rows: Vec<(TmdbId, String, String)> = (1..=50)
            .filter(|i| !gaps.contains(i))
            .map(|i| (TmdbId(i + 10_000), format!("Movie {i}"), format!("A tale, \"number\" {i}\nwith lines.")))
            .chain([(TmdbId(1), "Stray".into(), "Unmatched".into())])
            .collect();
        let mut buf = Vec::new();
        write_overviews(&mut buf, &rows).unwrap();
        let cov = attach_overviews(&mut cat, buf.as_slice(), "ov").unwrap();
        assert_eq!((cov.movies, cov.with_overview), (50, 43));
        assert_eq!(cov.unmatched_rows, 1);
        assert_eq!(cat[&MovieId(1)].overview.as_deref(), Some("A tale, \"number\" 1\nwith lines."));
    }

    #[test]
    fn coverage_zero_and_duplicates() {
        let mut cat = synthetic_catalog(5);
        let cov = attach_overviews(&mut cat, "tmdbId,title,overview\n1,a,b\n2,c,d\n".as_bytes(), "ov").unwrap();
        assert_eq!((cov.movies, cov.with_overview), (5, 0));
        let cov = attach_overviews(&mut cat, "tmdbId,title,overview\n10001,a,first\n10001,a,second\n".as_bytes(), "ov").unwrap();
        assert_eq!(cov.duplicate_rows, 1);
        assert_eq!(cat[&MovieId(1)].overview.as_deref(), Some("first"));
    }

    #[test]
    fn bundle_drops_orphans_and_classifies() {
        let mut cat = synthetic_catalog(10);
        for m in cat.values_mut() {
            m.overview = Some("rage and glee".into());
        }
        let mut lex = SynonymLexicon::new();
        lex.insert(EmotionClass::Anger, "rage").unwrap();
        let clf = LexiconClassifier::new(&lex, 1.0).unwrap();
        let mut ratings: Vec<_> = (1..=10).map(|m| RatingEvent::new(UserId(m % 3), MovieId(m), 3.0, m as i64).unwrap()).collect();
        for orphan in [100, 200, 300] {
            ratings.push(RatingEvent::new(UserId(1), MovieId(orphan), 3.0, 0).unwrap());
        }
        let b = build_bundle(ratings, cat, MvecSource::Classifier(&clf)).unwrap();
        assert_eq!(b.dropped_ratings, 3);
        assert_eq!(b.mvecs.len(), b.movies.len());
        assert_eq!(b.coverage.to_string(), "users=3 ratings=10 movies=10 overviews=10");
        b.check_integrity().unwrap();
    }

    #[test]
    fn bundle_with_precomputed_vectors() {
        let cat = synthetic_catalog(4);
        let mvecs: BTreeMap<_, _> = [1, 2, 77].into_iter().map(|m| (MovieId(m), EmotionVector::neutral())).collect();
        let ratings = vec![RatingEvent::new(UserId(1), MovieId(1), 3.0, 0).unwrap()];
        let b = build_bundle(ratings, cat, MvecSource::Precomputed(mvecs)).unwrap();
        assert_eq!(b.mvecs.len(), 2);
        assert_eq!(b.dropped_mvecs, 1);
        b.check_integrity().unwrap();

        let none = vec![RatingEvent::new(UserId(1), MovieId(99), 3.0, 0).unwrap()];
        assert!(build_bundle(none, synthetic_catalog(2), MvecSource::Precomputed(BTreeMap::new())).is_err());
    }
}
