//! Offline hit-rate evaluation of recommender lists and their emotion reranks.
//!
//! For every user and every split label `x-y`:
//!
//! 1. sort the user's ratings chronologically and keep the first `x`% as the
//!    train slice, the rest as validation;
//! 2. build the user's uvec from the train slice;
//! 3. ask the recommender for a top-20 list seeded by the last train movie
//!    (the "Mid" list);
//! 4. rerank that list with each metric;
//! 5. score every list and its top-10/top-5 prefixes by hit rate against the
//!    validation movies.
//!
//! Per-user hit rates are averaged per cell, users in ascending id order.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use log::debug;
use rayon::prelude::*;

use crate::affect::profile_from_history;
use crate::emotion::EmotionVector;
use crate::error::{Error, Result};
use crate::ids::{MovieId, UserId};
use crate::ingest::DatasetBundle;
use crate::recsys::{top_n_for_user, top_n_from_seed, FactorModel, RatingEvent, RecList};
use crate::rerank::{rerank, Metric, DEFAULT_MINKOWSKI_P};

/// Chronological split label `x-y`, `x` being the train percentage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplitLabel {
    train_pct: u8,
}

impl SplitLabel {
    pub fn new(train_pct: u8) -> Result<Self> {
        if (1..=99).contains(&train_pct) {
            Ok(Self { train_pct })
        } else {
            Err(Error::InvalidParameter(format!("train percent {train_pct} outside 1..=99")))
        }
    }

    pub fn train_pct(&self) -> u8 {
        self.train_pct
    }

    /// 10-90, 20-80, ..., 90-10.
    pub fn standard() -> Vec<SplitLabel> {
        (1..=9).map(|i| SplitLabel { train_pct: i * 10 }).collect()
    }
}

impl fmt::Display for SplitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.train_pct, 100 - self.train_pct)
    }
}

impl FromStr for SplitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad split label {s:?}"));
        let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
        let a: u8 = a.parse().map_err(|_| bad())?;
        let b: u8 = b.parse().map_err(|_| bad())?;
        if a as u16 + b as u16 != 100 {
            return Err(bad());
        }
        SplitLabel::new(a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserSplit {
    pub user: UserId,
    pub train: Vec<RatingEvent>,
    pub validation: Vec<RatingEvent>,
    pub label: SplitLabel,
}

/// Sort by `(timestamp, movieId)` and cut after `floor(count * x / 100)`
/// events, keeping at least one in train.
pub fn split_user_history(events: &[RatingEvent], label: SplitLabel) -> Result<UserSplit> {
    if events.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 events to split, got {}",
            events.len()
        )));
    }
    let user = events[0].user;
    if events.iter().any(|e| e.user != user) {
        return Err(Error::InvalidParameter("events span several users".into()));
    }
    let mut sorted = events.to_vec();
    sorted.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then(a.movie.cmp(&b.movie)));
    let n_train = (sorted.len() * label.train_pct as usize / 100).max(1);
    let validation = sorted.split_off(n_train);
    Ok(UserSplit {
        user,
        train: sorted,
        validation,
        label,
    })
}

/// Number of listed movies that appear in `validation`.
pub fn hit_count(recommended: &RecList, validation: &HashSet<MovieId>) -> usize {
    recommended.movie_ids().filter(|m| validation.contains(m)).count()
}

/// `100 * hits / list length`.
pub fn hit_rate(recommended: &RecList, validation: &HashSet<MovieId>) -> Result<f64> {
    if recommended.is_empty() {
        return Err(Error::Empty("recommendation list"));
    }
    Ok(100.0 * hit_count(recommended, validation) as f64 / recommended.len() as f64)
}

/// A report column: the recommender's own list or one of the reranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Mid,
    Euc,
    Mht,
    Mki,
    Cos,
    Pear,
}

impl Method {
    pub const ALL: [Method; 6] = [Method::Mid, Method::Euc, Method::Mht, Method::Mki, Method::Cos, Method::Pear];
    pub const METRICS: [Method; 5] = [Method::Euc, Method::Mht, Method::Mki, Method::Cos, Method::Pear];

    pub fn label(&self) -> &'static str {
        match self {
            Method::Mid => "Mid",
            Method::Euc => "Euc",
            Method::Mht => "Mht",
            Method::Mki => "Mki",
            Method::Cos => "Cos",
            Method::Pear => "Pear",
        }
    }

    pub fn metric(&self, minkowski_p: f64) -> Option<Metric> {
        let all = Metric::all(minkowski_p);
        match self {
            Method::Mid => None,
            m => Some(all[Method::METRICS.iter().position(|x| x == m).unwrap()]),
        }
    }

    fn from_label(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.label() == s)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How the recommender produces the Mid list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RecommendMode {
    /// Latent-factor neighbours of the user's last train movie.
    #[default]
    Seed,
    /// Highest predicted rating for the user.
    User,
}

impl FromStr for RecommendMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "seed" => Ok(RecommendMode::Seed),
            "user" => Ok(RecommendMode::User),
            other => Err(Error::InvalidParameter(format!("unknown recommend mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalSettings {
    pub splits: Vec<SplitLabel>,
    /// List lengths, in report panel order. The longest is generated, the
    /// others are its prefixes.
    pub list_lengths: Vec<usize>,
    pub minkowski_p: f64,
    pub mode: RecommendMode,
    /// Keep per-user rows in the report.
    pub keep_details: bool,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self {
            splits: SplitLabel::standard(),
            list_lengths: vec![20, 5, 10],
            minkowski_p: DEFAULT_MINKOWSKI_P,
            mode: RecommendMode::Seed,
            keep_details: false,
        }
    }
}

impl EvalSettings {
    fn max_len(&self) -> usize {
        self.list_lengths.iter().copied().max().unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        if self.splits.is_empty() {
            return Err(Error::InvalidParameter("no split labels".into()));
        }
        if self.list_lengths.is_empty() || self.list_lengths.contains(&0) {
            return Err(Error::InvalidParameter("list lengths must be positive".into()));
        }
        Metric::minkowski(self.minkowski_p)?;
        Ok(())
    }
}

/// Why a user was left out at one split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SkipReason {
    TooFewEvents,
    /// The seed (last train movie) or the user is unknown to the model.
    NotInModel,
    /// The seed movie has no mvec.
    SeedWithoutMvec,
    /// No train movie has an mvec, so the uvec is undefined.
    NoProfile,
    /// Every candidate was excluded.
    NoCandidates,
    /// A metric is undefined for this user (constant uvec under Pearson).
    UndefinedMetric,
}

impl SkipReason {
    pub fn label(&self) -> &'static str {
        match self {
            SkipReason::TooFewEvents => "too_few_events",
            SkipReason::NotInModel => "not_in_model",
            SkipReason::SeedWithoutMvec => "seed_without_mvec",
            SkipReason::NoProfile => "no_profile",
            SkipReason::NoCandidates => "no_candidates",
            SkipReason::UndefinedMetric => "undefined_metric",
        }
    }
}

/// One evaluated user at one split.
#[derive(Debug, Clone, PartialEq)]
pub struct UserEval {
    pub user: UserId,
    pub split: SplitLabel,
    pub train_len: usize,
    pub validation_len: usize,
    /// Movies excluded from the uvec for lack of an mvec.
    pub excluded_from_profile: usize,
    pub uvec: EmotionVector,
    /// Full-length list per method, in [`Method::ALL`] order.
    pub lists: Vec<RecList>,
    /// `hits[n_idx][method_idx]` for each list length in settings order.
    pub hits: Vec<[usize; 6]>,
    /// Matching hit percentages.
    pub pct: Vec<[f64; 6]>,
}

impl UserEval {
    pub fn list(&self, method: Method) -> &RecList {
        &self.lists[Method::ALL.iter().position(|m| *m == method).unwrap()]
    }
}

/// Shared read-only inputs for evaluation.
pub struct EvalContext<'a> {
    pub model: &'a FactorModel,
    pub mvecs: &'a BTreeMap<MovieId, EmotionVector>,
    pub settings: &'a EvalSettings,
    /// Model items that have no mvec; never recommended.
    no_mvec: HashSet<MovieId>,
}

impl<'a> EvalContext<'a> {
    pub fn new(
        model: &'a FactorModel,
        mvecs: &'a BTreeMap<MovieId, EmotionVector>,
        settings: &'a EvalSettings,
    ) -> Result<Self> {
        settings.validate()?;
        let no_mvec = model.items().iter().filter(|m| !mvecs.contains_key(m)).copied().collect();
        Ok(Self {
            model,
            mvecs,
            settings,
            no_mvec,
        })
    }
}

/// Run the per-user protocol at one split.
pub fn evaluate_user(
    ctx: &EvalContext<'_>,
    events: &[RatingEvent],
    split: SplitLabel,
) -> std::result::Result<UserEval, SkipReason> {
    let s = split_user_history(events, split).map_err(|_| SkipReason::TooFewEvents)?;
    let seed = s.train.last().expect("train slice is non-empty").movie;

    let train_movies: Vec<MovieId> = s.train.iter().map(|e| e.movie).collect();
    let (profile, excluded) = profile_from_history(s.user, &train_movies, ctx.mvecs);
    let profile = profile.ok_or(SkipReason::NoProfile)?;

    let mut exclude: HashSet<MovieId> = train_movies.iter().copied().collect();
    exclude.extend(ctx.no_mvec.iter().copied());
    let n = ctx.settings.max_len();
    let mid = match ctx.settings.mode {
        RecommendMode::Seed => {
            if !ctx.model.contains_item(seed) {
                return Err(SkipReason::NotInModel);
            }
            if !ctx.mvecs.contains_key(&seed) {
                return Err(SkipReason::SeedWithoutMvec);
            }
            top_n_from_seed(ctx.model, seed, n, &exclude)
        }
        RecommendMode::User => top_n_for_user(ctx.model, s.user, n, &exclude),
    }
    .map_err(|_| SkipReason::NotInModel)?;
    if mid.is_empty() {
        return Err(SkipReason::NoCandidates);
    }

    let mut lists = Vec::with_capacity(6);
    lists.push(mid.clone());
    for method in Method::METRICS {
        let metric = method.metric(ctx.settings.minkowski_p).unwrap();
        lists.push(rerank(&mid, ctx.mvecs, &profile.uvec, metric).map_err(|_| SkipReason::UndefinedMetric)?);
    }

    let validation: HashSet<MovieId> = s.validation.iter().map(|e| e.movie).collect();
    let mut hits = Vec::new();
    let mut pct = Vec::new();
    for &len in &ctx.settings.list_lengths {
        let mut h = [0; 6];
        let mut p = [0.0; 6];
        for (j, list) in lists.iter().enumerate() {
            let prefix = list.prefix(len);
            h[j] = hit_count(&prefix, &validation);
            p[j] = 100.0 * h[j] as f64 / prefix.len() as f64;
        }
        hits.push(h);
        pct.push(p);
    }

    Ok(UserEval {
        user: s.user,
        split,
        train_len: s.train.len(),
        validation_len: s.validation.len(),
        excluded_from_profile: excluded,
        uvec: profile.uvec,
        lists,
        hits,
        pct,
    })
}

/// Mean hit percentages by split x list length x method.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub splits: Vec<SplitLabel>,
    pub list_lengths: Vec<usize>,
    /// `cells[split_idx][len_idx][method_idx]`
    pub cells: Vec<Vec<[f64; 6]>>,
    /// Users averaged per split.
    pub evaluated: Vec<usize>,
    /// Skip counts per split.
    pub skipped: Vec<BTreeMap<SkipReason, usize>>,
    pub details: Vec<UserEval>,
}

/// Evaluate every user with ratings in `bundle` at every split.
pub fn run_experiment(bundle: &DatasetBundle, model: &FactorModel, settings: &EvalSettings) -> Result<EvalReport> {
    let ctx = EvalContext::new(model, &bundle.mvecs, settings)?;
    let mut by_user: BTreeMap<UserId, Vec<RatingEvent>> = BTreeMap::new();
    for r in &bundle.ratings {
        by_user.entry(r.user).or_default().push(*r);
    }
    let users: Vec<(&UserId, &Vec<RatingEvent>)> = by_user.iter().collect();

    let mut report = EvalReport {
        splits: settings.splits.clone(),
        list_lengths: settings.list_lengths.clone(),
        cells: Vec::new(),
        evaluated: Vec::new(),
        skipped: Vec::new(),
        details: Vec::new(),
    };
    for &split in &settings.splits {
        // par_iter + collect keeps user order, so sums are deterministic
        let outcomes: Vec<std::result::Result<UserEval, SkipReason>> = users
            .par_iter()
            .map(|(_, events)| evaluate_user(&ctx, events, split))
            .collect();
        let mut sums = vec![[0.0; 6]; settings.list_lengths.len()];
        let mut evaluated = 0;
        let mut skipped: BTreeMap<SkipReason, usize> = BTreeMap::new();
        for ((user, _), outcome) in users.iter().zip(outcomes) {
            match outcome {
                Ok(row) => {
                    evaluated += 1;
                    for (sum, p) in sums.iter_mut().zip(&row.pct) {
                        for j in 0..6 {
                            sum[j] += p[j];
                        }
                    }
                    if settings.keep_details {
                        report.details.push(row);
                    }
                }
                Err(reason) => {
                    debug!("split {split}: user {user} skipped ({})", reason.label());
                    *skipped.entry(reason).or_default() += 1;
                }
            }
        }
        if evaluated == 0 {
            return Err(Error::NoEligibleUsers(format!(" at split {split}")));
        }
        report
            .cells
            .push(sums.into_iter().map(|s| s.map(|x| x / evaluated as f64)).collect());
        report.evaluated.push(evaluated);
        report.skipped.push(skipped);
    }
    Ok(report)
}

fn fmt_pct(x: f64) -> String {
    format!("{x:.2}")
}

impl EvalReport {
    pub fn cell(&self, split: SplitLabel, len: usize, method: Method) -> Option<f64> {
        let s = self.splits.iter().position(|x| *x == split)?;
        let n = self.list_lengths.iter().position(|x| *x == len)?;
        let m = Method::ALL.iter().position(|x| *x == method)?;
        Some(self.cells[s][n][m])
    }

    fn panel_header(len: usize) -> Vec<String> {
        let mut h = vec![format!("Top{len} Split")];
        h.extend(Method::ALL.iter().map(|m| format!("{} Hit%", m.label())));
        h
    }

    /// Tab-separated panels, one per list length, two decimals.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (n, &len) in self.list_lengths.iter().enumerate() {
            let _ = writeln!(s, "{}", Self::panel_header(len).join("\t"));
            for (i, split) in self.splits.iter().enumerate() {
                let row: Vec<String> = self.cells[i][n].iter().map(|x| fmt_pct(*x)).collect();
                let _ = writeln!(s, "{split}\t{}", row.join("\t"));
            }
        }
        s
    }

    /// Aligned text with the same panels plus user counts.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        for (n, &len) in self.list_lengths.iter().enumerate() {
            let header = Self::panel_header(len);
            let _ = write!(s, "{:<12}", header[0]);
            for h in &header[1..] {
                let _ = write!(s, "{h:>10}");
            }
            s.push('\n');
            for (i, split) in self.splits.iter().enumerate() {
                let _ = write!(s, "{:<12}", split.to_string());
                for x in &self.cells[i][n] {
                    let _ = write!(s, "{:>10}", fmt_pct(*x));
                }
                s.push('\n');
            }
            s.push('\n');
        }
        // replayed reports carry no user counts
        for (i, (split, evaluated)) in self.splits.iter().zip(&self.evaluated).enumerate() {
            let _ = write!(s, "{split}: {evaluated} users evaluated");
            if let Some(skips) = self.skipped.get(i) {
                for (reason, count) in skips {
                    let _ = write!(s, ", {count} {}", reason.label());
                }
            }
            s.push('\n');
        }
        s
    }

    /// Parse the panels written by [`EvalReport::to_tsv`]. User counts and
    /// details are not part of the TSV and come back empty.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut splits: Vec<SplitLabel> = Vec::new();
        let mut list_lengths: Vec<usize> = Vec::new();
        let mut panels: Vec<Vec<(SplitLabel, [f64; 6])>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let ln = i as u64 + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 7 {
                return Err(Error::parse("report", ln, "expected 7 tab-separated fields"));
            }
            if let Some(len) = fields[0].strip_prefix("Top").and_then(|r| r.strip_suffix(" Split")) {
                let len: usize = len.parse().map_err(|_| Error::parse("report", ln, "bad panel header"))?;
                for (j, m) in Method::ALL.iter().enumerate() {
                    let label = fields[j + 1].trim_end_matches(" Hit%");
                    if Method::from_label(label) != Some(*m) {
                        return Err(Error::parse("report", ln, format!("expected column {}", m.label())));
                    }
                }
                list_lengths.push(len);
                panels.push(Vec::new());
                continue;
            }
            let panel = panels
                .last_mut()
                .ok_or_else(|| Error::parse("report", ln, "row before panel header"))?;
            let split: SplitLabel = fields[0].parse().map_err(|e: Error| Error::parse("report", ln, e.to_string()))?;
            let mut row = [0.0; 6];
            for j in 0..6 {
                row[j] = fields[j + 1]
                    .parse()
                    .map_err(|_| Error::parse("report", ln, format!("bad number {:?}", fields[j + 1])))?;
                if !(0.0..=100.0).contains(&row[j]) {
                    return Err(Error::parse("report", ln, "hit% outside [0, 100]"));
                }
            }
            panel.push((split, row));
        }
        if panels.is_empty() {
            return Err(Error::Empty("report"));
        }
        splits.extend(panels[0].iter().map(|(s, _)| *s));
        for p in &panels {
            if p.iter().map(|(s, _)| *s).collect::<Vec<_>>() != splits {
                return Err(Error::parse("report", 0, "panels list different splits"));
            }
        }
        let cells = (0..splits.len())
            .map(|i| panels.iter().map(|p| p[i].1).collect())
            .collect();
        Ok(EvalReport {
            splits,
            list_lengths,
            cells,
            evaluated: Vec::new(),
            skipped: Vec::new(),
            details: Vec::new(),
        })
    }

    /// Per-user lists and hit rates, one block of rows per user and split,
    /// pivoted like a `rank x method` table.
    ///
    /// Columns: `userId,split,row,Mid,Euc,Mht,Mki,Cos,Pear`. `row` is a rank
    /// (1-based) for list rows and `T<n>%` for hit-rate rows.
    pub fn detail_csv(&self) -> String {
        let mut s = String::from("userId,split,row,Mid,Euc,Mht,Mki,Cos,Pear\n");
        for d in &self.details {
            let depth = d.lists.iter().map(RecList::len).max().unwrap_or(0);
            for rank in 0..depth {
                let _ = write!(s, "{},{},{}", d.user, d.split, rank + 1);
                for list in &d.lists {
                    match list.items().get(rank) {
                        Some((m, _)) => {
                            let _ = write!(s, ",{m}");
                        }
                        None => s.push(','),
                    }
                }
                s.push('\n');
            }
            for (n, len) in self.list_lengths.iter().enumerate() {
                let _ = write!(s, "{},{},T{len}%", d.user, d.split);
                for p in &d.pct[n] {
                    let _ = write!(s, ",{}", fmt_pct(*p));
                }
                s.push('\n');
            }
        }
        s
    }
}

/// How [`pick_winner`] aggregates the non-full-length panels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WinnerRule {
    /// Count the (split, length) rows in which a metric attains the row
    /// maximum (ties credit every tied metric). Ties in the count go to the
    /// higher mean hit%, then to declaration order.
    #[default]
    RowWins,
    /// Highest mean hit% over the cells; ties go to declaration order.
    MeanHit,
}

/// The best reranking metric. Rows where all five metrics agree (every
/// full-length row, since reranking permutes a fixed set) are ignored.
pub fn pick_winner(report: &EvalReport) -> Method {
    pick_winner_by(report, WinnerRule::default())
}

pub fn pick_winner_by(report: &EvalReport, rule: WinnerRule) -> Method {
    let mut wins = [0usize; 5];
    let mut sums = [0.0f64; 5];
    let mut count = 0usize;
    for split_cells in &report.cells {
        for row in split_cells {
            let metrics = &row[1..];
            if metrics.iter().all(|x| *x == metrics[0]) {
                continue;
            }
            let best = metrics.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for j in 0..5 {
                sums[j] += metrics[j];
                if metrics[j] == best {
                    wins[j] += 1;
                }
            }
            count += 1;
        }
    }
    let means = sums.map(|s| if count == 0 { 0.0 } else { s / count as f64 });
    let mut best = 0;
    for j in 1..5 {
        let better = match rule {
            WinnerRule::RowWins => wins[j] > wins[best] || (wins[j] == wins[best] && means[j] > means[best]),
            WinnerRule::MeanHit => means[j] > means[best],
        };
        if better {
            best = j;
        }
    }
    Method::METRICS[best]
}
