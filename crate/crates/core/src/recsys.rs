//! Biased matrix factorization trained by stochastic gradient descent, and
//! top-N list generation.
//!
//! The model predicts `mu + b_u + b_i + q_i . p_u`. Training visits the
//! ratings in a freshly shuffled order each epoch and updates biases and both
//! factor vectors from the same residual.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ids::{MovieId, UserId};
use crate::rerank::Metric;

pub const MIN_RATING: f64 = 0.5;
pub const MAX_RATING: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingEvent {
    pub user: UserId,
    pub movie: MovieId,
    pub rating: f64,
    /// Seconds since the epoch.
    pub timestamp: i64,
}

impl RatingEvent {
    pub fn new(user: UserId, movie: MovieId, rating: f64, timestamp: i64) -> Result<Self> {
        if !(MIN_RATING..=MAX_RATING).contains(&rating) {
            return Err(Error::InvalidParameter(format!(
                "rating {rating} outside [{MIN_RATING}, {MAX_RATING}]"
            )));
        }
        if timestamp < 0 {
            return Err(Error::InvalidParameter(format!("negative timestamp {timestamp}")));
        }
        Ok(Self {
            user,
            movie,
            rating,
            timestamp,
        })
    }
}

/// Training hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyper {
    pub k: usize,
    pub learning_rate: f64,
    pub regularization: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Factors start uniform in `[-init_range, init_range]`.
    pub init_range: f64,
}

impl Default for Hyper {
    fn default() -> Self {
        Self {
            k: 50,
            learning_rate: 0.005,
            regularization: 0.02,
            epochs: 20,
            seed: 0,
            init_range: 0.05,
        }
    }
}

impl Hyper {
    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(format!("{what} must be positive")));
        if self.k == 0 {
            return bad("k");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate");
        }
        if !(self.regularization > 0.0 && self.regularization.is_finite()) {
            return bad("regularization");
        }
        if self.epochs == 0 {
            return bad("epochs");
        }
        if !(self.init_range >= 0.0 && self.init_range.is_finite()) {
            return Err(Error::InvalidParameter("init_range must be non-negative".into()));
        }
        Ok(())
    }
}

/// A trained factorization model. Users and items are stored in ascending
/// key order, factors row-major with `k` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorModel {
    global_mean: f64,
    k: usize,
    users: Vec<UserId>,
    items: Vec<MovieId>,
    user_bias: Vec<f64>,
    item_bias: Vec<f64>,
    user_factors: Vec<f64>,
    item_factors: Vec<f64>,
    user_index: HashMap<UserId, usize>,
    item_index: HashMap<MovieId, usize>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn train(ratings: &[RatingEvent], hyper: &Hyper) -> Result<FactorModel> {
    train_logged(ratings, hyper).map(|(m, _)| m)
}

/// Train and also return the training-set RMSE after every epoch.
pub fn train_logged(ratings: &[RatingEvent], hyper: &Hyper) -> Result<(FactorModel, Vec<f64>)> {
    if ratings.is_empty() {
        return Err(Error::Empty("ratings"));
    }
    hyper.validate()?;

    let users: Vec<UserId> = ratings.iter().map(|r| r.user).collect::<BTreeSet<_>>().into_iter().collect();
    let items: Vec<MovieId> = ratings.iter().map(|r| r.movie).collect::<BTreeSet<_>>().into_iter().collect();
    let user_index: HashMap<UserId, usize> = users.iter().enumerate().map(|(i, u)| (*u, i)).collect();
    let item_index: HashMap<MovieId, usize> = items.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let triples: Vec<(usize, usize, f64)> = ratings
        .iter()
        .map(|r| (user_index[&r.user], item_index[&r.movie], r.rating))
        .collect();

    let k = hyper.k;
    let mut rng = ChaCha8Rng::seed_from_u64(hyper.seed);
    let mut init = |n: usize| -> Vec<f64> {
        (0..n)
            .map(|_| {
                if hyper.init_range == 0.0 {
                    0.0
                } else {
                    rng.random_range(-hyper.init_range..=hyper.init_range)
                }
            })
            .collect()
    };
    let mut model = FactorModel {
        global_mean: triples.iter().map(|t| t.2).sum::<f64>() / triples.len() as f64,
        k,
        user_bias: vec![0.0; users.len()],
        item_bias: vec![0.0; items.len()],
        user_factors: init(users.len() * k),
        item_factors: init(items.len() * k),
        users,
        items,
        user_index,
        item_index,
    };

    let lr = hyper.learning_rate;
    let reg = hyper.regularization;
    let mut order: Vec<usize> = (0..triples.len()).collect();
    let mut history = Vec::with_capacity(hyper.epochs);
    for _ in 0..hyper.epochs {
        order.shuffle(&mut rng);
        for &t in &order {
            let (u, i, r) = triples[t];
            let pu = u * k..(u + 1) * k;
            let qi = i * k..(i + 1) * k;
            let pred = model.global_mean
                + model.user_bias[u]
                + model.item_bias[i]
                + dot(&model.user_factors[pu.clone()], &model.item_factors[qi.clone()]);
            let err = r - pred;
            model.user_bias[u] += lr * (err - reg * model.user_bias[u]);
            model.item_bias[i] += lr * (err - reg * model.item_bias[i]);
            for f in 0..k {
                let p = model.user_factors[pu.start + f];
                let q = model.item_factors[qi.start + f];
                model.user_factors[pu.start + f] += lr * (err * q - reg * p);
                model.item_factors[qi.start + f] += lr * (err * p - reg * q);
            }
        }
        history.push(model.raw_rmse(&triples));
    }
    Ok((model, history))
}

impl FactorModel {
    fn raw_rmse(&self, triples: &[(usize, usize, f64)]) -> f64 {
        let k = self.k;
        let sse: f64 = triples
            .iter()
            .map(|&(u, i, r)| {
                let pred = self.global_mean
                    + self.user_bias[u]
                    + self.item_bias[i]
                    + dot(&self.user_factors[u * k..(u + 1) * k], &self.item_factors[i * k..(i + 1) * k]);
                (r - pred).powi(2)
            })
            .sum();
        (sse / triples.len() as f64).sqrt()
    }

    pub fn global_mean(&self) -> f64 {
        self.global_mean
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn users(&self) -> &[UserId] {
        &self.users
    }

    pub fn items(&self) -> &[MovieId] {
        &self.items
    }

    pub fn contains_user(&self, user: UserId) -> bool {
        self.user_index.contains_key(&user)
    }

    pub fn contains_item(&self, movie: MovieId) -> bool {
        self.item_index.contains_key(&movie)
    }

    pub fn item_factors(&self, movie: MovieId) -> Option<&[f64]> {
        let i = *self.item_index.get(&movie)?;
        Some(&self.item_factors[i * self.k..(i + 1) * self.k])
    }

    pub fn user_factors(&self, user: UserId) -> Option<&[f64]> {
        let u = *self.user_index.get(&user)?;
        Some(&self.user_factors[u * self.k..(u + 1) * self.k])
    }

    pub fn item_bias(&self, movie: MovieId) -> Option<f64> {
        self.item_index.get(&movie).map(|&i| self.item_bias[i])
    }

    pub fn user_bias(&self, user: UserId) -> Option<f64> {
        self.user_index.get(&user).map(|&u| self.user_bias[u])
    }

    /// Unclamped estimate; unknown users or items contribute zero terms.
    pub fn predict_raw(&self, user: UserId, movie: MovieId) -> f64 {
        let mut est = self.global_mean;
        est += self.user_bias(user).unwrap_or(0.0);
        est += self.item_bias(movie).unwrap_or(0.0);
        if let (Some(p), Some(q)) = (self.user_factors(user), self.item_factors(movie)) {
            est += dot(p, q);
        }
        est
    }

    /// Estimate clamped to the rating scale.
    pub fn predict(&self, user: UserId, movie: MovieId) -> f64 {
        self.predict_raw(user, movie).clamp(MIN_RATING, MAX_RATING)
    }

    /// Root mean squared error of clamped predictions.
    pub fn rmse(&self, ratings: &[RatingEvent]) -> f64 {
        if ratings.is_empty() {
            return 0.0;
        }
        let sse: f64 = ratings
            .iter()
            .map(|r| (r.rating - self.predict(r.user, r.movie)).powi(2))
            .sum();
        (sse / ratings.len() as f64).sqrt()
    }

    /// Multiply every item factor by `factor`. Used to check that latent
    /// cosine rankings ignore scale.
    pub fn scale_item_factors(&mut self, factor: f64) {
        for q in &mut self.item_factors {
            *q *= factor;
        }
    }

    /// Text checkpoint. `f64` values are written in shortest round-trip form,
    /// so [`FactorModel::read_checkpoint`] restores the model exactly.
    ///
    /// ```text
    /// affectrec-factor-model,1
    /// global_mean,<mu>
    /// k,<k>
    /// user,<userId>,<bias>,<f_1>,...,<f_k>
    /// item,<movieId>,<bias>,<f_1>,...,<f_k>
    /// ```
    pub fn to_checkpoint(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "affectrec-factor-model,1");
        let _ = writeln!(s, "global_mean,{}", self.global_mean);
        let _ = writeln!(s, "k,{}", self.k);
        let k = self.k;
        for (u, id) in self.users.iter().enumerate() {
            let _ = write!(s, "user,{id},{}", self.user_bias[u]);
            for f in &self.user_factors[u * k..(u + 1) * k] {
                let _ = write!(s, ",{f}");
            }
            s.push('\n');
        }
        for (i, id) in self.items.iter().enumerate() {
            let _ = write!(s, "item,{id},{}", self.item_bias[i]);
            for f in &self.item_factors[i * k..(i + 1) * k] {
                let _ = write!(s, ",{f}");
            }
            s.push('\n');
        }
        s
    }

    pub fn read_checkpoint<R: BufRead>(reader: R, file: &str) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let mut next = |what: &str| -> Result<(u64, String)> {
            match lines.next() {
                Some((i, Ok(l))) => Ok((i as u64 + 1, l)),
                Some((i, Err(e))) => Err(Error::parse(file, i as u64 + 1, e.to_string())),
                None => Err(Error::parse(file, 0, format!("missing {what}"))),
            }
        };
        let (_, magic) = next("header")?;
        if magic.trim() != "affectrec-factor-model,1" {
            return Err(Error::parse(file, 1, "not a factor model checkpoint"));
        }
        let num = |line: u64, s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::parse(file, line, format!("bad number {s:?}")))
        };
        let (ln, mean_line) = next("global_mean")?;
        let global_mean = match mean_line.split_once(',') {
            Some(("global_mean", v)) => num(ln, v)?,
            _ => return Err(Error::parse(file, ln, "expected global_mean")),
        };
        let (ln, k_line) = next("k")?;
        let k: usize = match k_line.split_once(',') {
            Some(("k", v)) => v.parse().map_err(|_| Error::parse(file, ln, "bad k"))?,
            _ => return Err(Error::parse(file, ln, "expected k")),
        };
        if k == 0 {
            return Err(Error::parse(file, ln, "k must be positive"));
        }

        let mut model = FactorModel {
            global_mean,
            k,
            users: Vec::new(),
            items: Vec::new(),
            user_bias: Vec::new(),
            item_bias: Vec::new(),
            user_factors: Vec::new(),
            item_factors: Vec::new(),
            user_index: HashMap::new(),
            item_index: HashMap::new(),
        };
        for (i, line) in lines {
            let ln = i as u64 + 1;
            let line = line.map_err(|e| Error::parse(file, ln, e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 + k {
                return Err(Error::parse(file, ln, format!("expected {} fields", 3 + k)));
            }
            let id: u32 = fields[1]
                .parse()
                .map_err(|_| Error::parse(file, ln, "bad id"))?;
            let bias = num(ln, fields[2])?;
            let factors = fields[3..].iter().map(|f| num(ln, f)).collect::<Result<Vec<_>>>()?;
            match fields[0] {
                "user" => {
                    let id = UserId(id);
                    if model.user_index.insert(id, model.users.len()).is_some() {
                        return Err(Error::DuplicateKey(format!("user {id}")));
                    }
                    model.users.push(id);
                    model.user_bias.push(bias);
                    model.user_factors.extend(factors);
                }
                "item" => {
                    let id = MovieId(id);
                    if model.item_index.insert(id, model.items.len()).is_some() {
                        return Err(Error::DuplicateKey(format!("item {id}")));
                    }
                    model.items.push(id);
                    model.item_bias.push(bias);
                    model.item_factors.extend(factors);
                }
                other => return Err(Error::parse(file, ln, format!("unknown row kind {other:?}"))),
            }
        }
        Ok(model)
    }
}

/// Where a [`RecList`] came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Origin {
    Recommender,
    Reranked(Metric),
}

impl Origin {
    pub fn label(&self) -> &'static str {
        match self {
            Origin::Recommender => "Mid",
            Origin::Reranked(m) => m.short_name(),
        }
    }
}

/// Ordered, duplicate-free list of scored movies.
#[derive(Debug, Clone, PartialEq)]
pub struct RecList {
    items: Vec<(MovieId, f64)>,
    origin: Origin,
}

impl RecList {
    pub fn new(items: Vec<(MovieId, f64)>, origin: Origin) -> Result<Self> {
        let mut seen = HashSet::with_capacity(items.len());
        for (m, _) in &items {
            if !seen.insert(*m) {
                return Err(Error::DuplicateKey(format!("movieId {m} in recommendation list")));
            }
        }
        Ok(Self { items, origin })
    }

    pub fn items(&self) -> &[(MovieId, f64)] {
        &self.items
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn movie_ids(&self) -> impl Iterator<Item = MovieId> + '_ {
        self.items.iter().map(|(m, _)| *m)
    }

    /// The first `n` entries.
    pub fn prefix(&self, n: usize) -> RecList {
        RecList {
            items: self.items[..n.min(self.items.len())].to_vec(),
            origin: self.origin,
        }
    }

    /// `rank,movieId,score,metric`
    pub fn to_csv(&self) -> String {
        let mut s = String::from("rank,movieId,score,metric\n");
        self.append_csv_rows(&mut s);
        s
    }

    pub(crate) fn append_csv_rows(&self, s: &mut String) {
        for (rank, (m, score)) in self.items.iter().enumerate() {
            let _ = writeln!(s, "{},{m},{score},{}", rank + 1, self.origin.label());
        }
    }
}

/// Score descending, movieId ascending.
fn rank_desc(scored: &mut [(MovieId, f64)]) {
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
}

fn cosine_or_zero(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot(a, b) / (na * nb)
    }
}

/// Items most similar to `seed` in latent space (cosine between item factor
/// vectors). A zero factor vector scores 0 against everything.
pub fn top_n_from_seed(
    model: &FactorModel,
    seed: MovieId,
    n: usize,
    exclude: &HashSet<MovieId>,
) -> Result<RecList> {
    let q_seed = model.item_factors(seed).ok_or(Error::UnknownMovie(seed))?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut scored: Vec<(MovieId, f64)> = model
        .items
        .iter()
        .filter(|m| **m != seed && !exclude.contains(m))
        .map(|&m| (m, cosine_or_zero(q_seed, model.item_factors(m).unwrap_or(&[]))))
        .collect();
    rank_desc(&mut scored);
    scored.truncate(n);
    RecList::new(scored, Origin::Recommender)
}

/// Unseen items with the highest predicted rating for `user`.
pub fn top_n_for_user(
    model: &FactorModel,
    user: UserId,
    n: usize,
    exclude: &HashSet<MovieId>,
) -> Result<RecList> {
    if !model.contains_user(user) {
        return Err(Error::UnknownUser(user));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut scored: Vec<(MovieId, f64)> = model
        .items
        .iter()
        .filter(|m| !exclude.contains(m))
        .map(|&m| (m, model.predict(user, m)))
        .collect();
    rank_desc(&mut scored);
    scored.truncate(n);
    RecList::new(scored, Origin::Recommender)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// A model with hand-set item factors, biases zero, one user.
    pub(crate) fn toy_model(item_factors: &[(u32, Vec<f64>)], user_factors: Vec<f64>) -> FactorModel {
        let k = user_factors.len();
        let mut items: Vec<_> = item_factors.to_vec();
        items.sort_by_key(|(id, _)| *id);
        FactorModel {
            global_mean: 3.0,
            k,
            users: vec![UserId(1)],
            user_bias: vec![0.0],
            user_factors: user_factors.clone(),
            user_index: [(UserId(1), 0)].into_iter().collect(),
            items: items.iter().map(|(id, _)| MovieId(*id)).collect(),
            item_bias: vec![0.0; items.len()],
            item_factors: items.iter().flat_map(|(_, f)| f.clone()).collect(),
            item_index: items.iter().enumerate().map(|(i, (id, _))| (MovieId(*id), i)).collect(),
        }
    }

    fn ev(u: u32, m: u32, r: f64) -> RatingEvent {
        RatingEvent::new(UserId(u), MovieId(m), r, 0).unwrap()
    }

    #[test]
    fn rating_event_bounds() {
        assert!(RatingEvent::new(UserId(1), MovieId(1), 0.4, 0).is_err());
        assert!(RatingEvent::new(UserId(1), MovieId(1), 5.5, 0).is_err());
        assert!(RatingEvent::new(UserId(1), MovieId(1), 4.0, -1).is_err());
        let e = RatingEvent::new(UserId(400), MovieId(44665), 4.0, 1498870148).unwrap();
        assert_eq!(e.timestamp, 1498870148);
    }

    #[test]
    fn train_rejects_bad_input() {
        assert!(matches!(train(&[], &Hyper::default()), Err(Error::Empty(_))));
        let one = [ev(1, 1, 4.0)];
        for h in [
            Hyper { k: 0, ..Hyper::default() },
            Hyper { learning_rate: 0.0, ..Hyper::default() },
            Hyper { regularization: -1.0, ..Hyper::default() },
            Hyper { epochs: 0, ..Hyper::default() },
        ] {
            assert!(train(&one, &h).is_err());
        }
    }

    #[test]
    fn single_rating_fit() {
        let m = train(&[ev(1, 1, 4.0)], &Hyper::default()).unwrap();
        assert_eq!(m.global_mean(), 4.0);
        assert!((m.predict(UserId(1), MovieId(1)) - 4.0).abs() < 0.1);
    }

    #[test]
    fn cold_fallback_is_global_mean() {
        let m = train(&[ev(1, 1, 4.0), ev(2, 2, 2.0)], &Hyper::default()).unwrap();
        assert_eq!(m.predict(UserId(99), MovieId(99)), 3.0);
        let high = train(&[ev(1, 1, 5.0)], &Hyper::default()).unwrap();
        assert_eq!(high.predict(UserId(9), MovieId(9)), 5.0);
    }

    #[test]
    fn training_is_reproducible() {
        let ratings: Vec<_> = (0..50).map(|i| ev(i % 7, i % 11, 1.0 + (i % 9) as f64 * 0.5)).collect();
        let h = Hyper { k: 4, epochs: 5, seed: 11, ..Hyper::default() };
        let a = train(&ratings, &h).unwrap();
        let b = train(&ratings, &h).unwrap();
        assert_eq!(a.to_checkpoint(), b.to_checkpoint());
        let c = train(&ratings, &Hyper { seed: 12, ..h }).unwrap();
        assert_ne!(a.to_checkpoint(), c.to_checkpoint());
    }

    #[test]
    fn checkpoint_round_trips_exactly() {
        let ratings: Vec<_> = (0..40).map(|i| ev(i % 5, 100 + i % 8, 0.5 + (i % 10) as f64 * 0.5)).collect();
        let m = train(&ratings, &Hyper { k: 3, epochs: 3, ..Hyper::default() }).unwrap();
        let text = m.to_checkpoint();
        let back = FactorModel::read_checkpoint(text.as_bytes(), "mem").unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_checkpoint(), text);
    }

    #[test]
    fn checkpoint_rejects_garbage() {
        assert!(FactorModel::read_checkpoint("nope\n".as_bytes(), "mem").is_err());
        let bad = "affectrec-factor-model,1\nglobal_mean,3\nk,2\nitem,1,0,0.1\n";
        assert!(FactorModel::read_checkpoint(bad.as_bytes(), "mem").is_err());
        let dup = "affectrec-factor-model,1\nglobal_mean,3\nk,1\nitem,1,0,0.1\nitem,1,0,0.2\n";
        assert!(matches!(
            FactorModel::read_checkpoint(dup.as_bytes(), "mem"),
            Err(Error::DuplicateKey(_))
        ));
    }

    fn ten_items() -> FactorModel {
        toy_model(
            &[
                (1, vec![1.0, 0.0, 0.0]),
                (2, vec![0.9, 0.1, 0.0]),
                (3, vec![0.0, 1.0, 0.0]),
                (4, vec![-1.0, 0.0, 0.0]),
                (5, vec![0.5, 0.5, 0.5]),
                (6, vec![2.0, 0.0, 0.0]),
                (7, vec![0.0, 0.0, 1.0]),
                (8, vec![0.7, -0.7, 0.1]),
                (9, vec![3.0, 0.0, 0.0]),
                (10, vec![0.0, 0.0, 0.0]),
            ],
            vec![0.3, -0.2, 0.8],
        )
    }

    #[test]
    fn seed_ranking_matches_brute_force() {
        let m = ten_items();
        let list = top_n_from_seed(&m, MovieId(1), 9, &HashSet::new()).unwrap();
        // brute force: cosine of every other item to (1,0,0) is x / |q|
        let mut expected: Vec<(u32, f64)> = Vec::new();
        for id in 2..=10u32 {
            let q = m.item_factors(MovieId(id)).unwrap();
            let norm = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
            expected.push((id, if norm == 0.0 { 0.0 } else { q[0] / norm }));
        }
        expected.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let got: Vec<u32> = list.movie_ids().map(|m| m.0).collect();
        let want: Vec<u32> = expected.iter().map(|e| e.0).collect();
        assert_eq!(got, want);
        // items 6 and 9 both have cosine exactly 1; the tie goes to the lower id
        assert!(got.iter().position(|&x| x == 6) < got.iter().position(|&x| x == 9));
    }

    #[test]
    fn seed_list_excludes_and_truncates() {
        let m = ten_items();
        let exclude: HashSet<_> = [MovieId(2), MovieId(6)].into_iter().collect();
        let list = top_n_from_seed(&m, MovieId(1), 100, &exclude).unwrap();
        assert_eq!(list.len(), 7);
        assert!(list.movie_ids().all(|x| x != MovieId(1) && !exclude.contains(&x)));
        assert!(matches!(
            top_n_from_seed(&m, MovieId(77), 5, &exclude),
            Err(Error::UnknownMovie(_))
        ));
        let full = top_n_from_seed(&m, MovieId(3), 9, &HashSet::new()).unwrap();
        for n in 1..=9 {
            assert_eq!(top_n_from_seed(&m, MovieId(3), n, &HashSet::new()).unwrap(), full.prefix(n));
        }
    }

    #[test]
    fn seed_ranking_ignores_factor_scale() {
        let mut m = ten_items();
        let before: Vec<_> = top_n_from_seed(&m, MovieId(5), 9, &HashSet::new()).unwrap().movie_ids().collect();
        // a power of two keeps exact cosine ties exact
        m.scale_item_factors(4.0);
        let after: Vec<_> = top_n_from_seed(&m, MovieId(5), 9, &HashSet::new()).unwrap().movie_ids().collect();
        assert_eq!(before, after);
    }

    #[test]
    fn user_mode_top_one_is_argmax() {
        let m = ten_items();
        let list = top_n_for_user(&m, UserId(1), 1, &HashSet::new()).unwrap();
        let best = m
            .items()
            .iter()
            .map(|&i| (i, m.predict(UserId(1), i)))
            .fold(None::<(MovieId, f64)>, |acc, (i, p)| match acc {
                Some((_, bp)) if bp >= p => acc,
                _ => Some((i, p)),
            })
            .unwrap();
        assert_eq!(list.items()[0].0, best.0);

        let full = top_n_for_user(&m, UserId(1), 10, &HashSet::new()).unwrap();
        assert!(full.items().windows(2).all(|w| w[0].1 >= w[1].1));

        let all: HashSet<_> = m.items().iter().copied().collect();
        assert!(top_n_for_user(&m, UserId(1), 5, &all).unwrap().is_empty());
        assert!(top_n_for_user(&m, UserId(2), 5, &all).is_err());
    }

    #[test]
    fn rec_list_rejects_duplicates() {
        assert!(RecList::new(vec![(MovieId(1), 1.0), (MovieId(1), 0.5)], Origin::Recommender).is_err());
        let l = RecList::new(vec![(MovieId(5), 0.5), (MovieId(2), 0.25)], Origin::Recommender).unwrap();
        assert_eq!(l.to_csv(), "rank,movieId,score,metric\n1,5,0.5,Mid\n2,2,0.25,Mid\n");
    }
}
