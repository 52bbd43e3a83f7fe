//! Vector metrics over emotion vectors and reranking of recommendation lists.
//!
//! Distances (Euclidean, Manhattan, Minkowski) rank closest first;
//! similarities (cosine, Pearson) rank largest first.

use std::collections::BTreeMap;
use std::fmt;

use crate::emotion::EmotionVector;
use crate::error::{Error, Result};
use crate::ids::MovieId;
use crate::recsys::{Origin, RecList};

pub const DEFAULT_MINKOWSKI_P: f64 = 3.0;

pub fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "dimension mismatch");
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

pub fn manhattan(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "dimension mismatch");
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
}

/// `(sum |x_i - y_i|^p)^(1/p)`; panics unless `p > 0`.
pub fn minkowski(x: &[f64], y: &[f64], p: f64) -> f64 {
    assert_eq!(x.len(), y.len(), "dimension mismatch");
    assert!(p > 0.0, "Minkowski order must be positive");
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

pub fn inner(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "dimension mismatch");
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn cosine_sim(x: &[f64], y: &[f64]) -> Result<f64> {
    let nx = inner(x, x).sqrt();
    let ny = inner(y, y).sqrt();
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(inner(x, y) / (nx * ny))
}

/// Cosine similarity of the mean-centered vectors. Centering is across the
/// components of each vector.
pub fn pearson_corr(x: &[f64], y: &[f64]) -> Result<f64> {
    let center = |v: &[f64]| {
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|a| a - mean).collect::<Vec<_>>()
    };
    let cx = center(x);
    let cy = center(y);
    // exact-zero check misses near-constant vectors such as 1/7 repeated,
    // whose centered entries are rounding noise
    let scale = |v: &[f64], c: &[f64]| {
        let m = v.iter().fold(0.0f64, |acc, a| acc.max(a.abs()));
        c.iter().all(|a| a.abs() <= m * 1e-12)
    };
    if scale(x, &cx) || scale(y, &cy) {
        return Err(Error::UndefinedCorrelation);
    }
    cosine_sim(&cx, &cy).map_err(|_| Error::UndefinedCorrelation)
}

/// Sort direction of a metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Smaller is closer.
    Ascending,
    /// Larger is closer.
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Euclidean,
    Manhattan,
    Minkowski { p: f64 },
    Cosine,
    Pearson,
}

impl Metric {
    /// The five metrics in declaration order.
    pub fn all(minkowski_p: f64) -> [Metric; 5] {
        [
            Metric::Euclidean,
            Metric::Manhattan,
            Metric::Minkowski { p: minkowski_p },
            Metric::Cosine,
            Metric::Pearson,
        ]
    }

    pub fn minkowski(p: f64) -> Result<Metric> {
        if p > 0.0 && p.is_finite() {
            Ok(Metric::Minkowski { p })
        } else {
            Err(Error::InvalidParameter(format!("Minkowski order must be positive, got {p}")))
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Metric::Euclidean | Metric::Manhattan | Metric::Minkowski { .. } => Direction::Ascending,
            Metric::Cosine | Metric::Pearson => Direction::Descending,
        }
    }

    /// Column label used in reports.
    pub fn short_name(&self) -> &'static str {
        match self {
            Metric::Euclidean => "Euc",
            Metric::Manhattan => "Mht",
            Metric::Minkowski { .. } => "Mki",
            Metric::Cosine => "Cos",
            Metric::Pearson => "Pear",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan => "manhattan",
            Metric::Minkowski { .. } => "minkowski",
            Metric::Cosine => "cosine",
            Metric::Pearson => "pearson",
        }
    }

    pub fn evaluate(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        match *self {
            Metric::Euclidean => Ok(euclidean(x, y)),
            Metric::Manhattan => Ok(manhattan(x, y)),
            Metric::Minkowski { p } => Ok(minkowski(x, y, p)),
            Metric::Cosine => cosine_sim(x, y),
            Metric::Pearson => pearson_corr(x, y),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Minkowski { p } => write!(f, "minkowski(p={p})"),
            m => f.write_str(m.name()),
        }
    }
}

/// Reorder `candidates` by closeness of each movie's mvec to `uvec`.
///
/// The sort is stable: candidates with equal metric values keep their
/// incoming order. Output scores are the metric values.
pub fn rerank(
    candidates: &RecList,
    mvecs: &BTreeMap<MovieId, EmotionVector>,
    uvec: &EmotionVector,
    metric: Metric,
) -> Result<RecList> {
    let mut scored = Vec::with_capacity(candidates.len());
    for movie in candidates.movie_ids() {
        let mvec = mvecs.get(&movie).ok_or(Error::MissingMvec(movie))?;
        scored.push((movie, metric.evaluate(mvec.as_slice(), uvec.as_slice())?));
    }
    match metric.direction() {
        Direction::Ascending => scored.sort_by(|a, b| a.1.total_cmp(&b.1)),
        Direction::Descending => scored.sort_by(|a, b| b.1.total_cmp(&a.1)),
    }
    RecList::new(scored, Origin::Reranked(metric))
}
