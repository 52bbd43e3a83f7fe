//! Movie emotion vectors (mvec) and user emotion profiles (uvec).
//!
//! A movie's mvec is whatever the classifier says about its overview and
//! never changes. A user's uvec is the unweighted mean of the mvecs of the
//! movies they watched, and moves as they watch more.

use std::collections::BTreeMap;
use std::io::Write;

use crate::emotion::{EmotionClassifier, EmotionVector};
use crate::error::{Error, Result};
use crate::ids::{MovieId, UserId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovieAffect {
    pub movie_id: MovieId,
    pub mvec: EmotionVector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserProfile {
    pub user_id: UserId,
    pub uvec: EmotionVector,
    /// Number of mvec-bearing movies averaged into `uvec`.
    pub watch_count: u64,
}

pub fn movie_mvec(overview: &str, clf: &dyn EmotionClassifier) -> EmotionVector {
    clf.classify(overview)
}

/// Componentwise arithmetic mean.
pub fn user_uvec(mvecs: &[EmotionVector]) -> Result<EmotionVector> {
    if mvecs.is_empty() {
        return Err(Error::Empty("mvec list (user profile undefined)"));
    }
    let mut sum = [0.0; 7];
    for v in mvecs {
        for (s, w) in sum.iter_mut().zip(v.weights()) {
            *s += w;
        }
    }
    let n = mvecs.len() as f64;
    Ok(EmotionVector::from_raw_unchecked(sum.map(|s| s / n)))
}

/// Fold one more watched movie into a profile.
pub fn update_uvec(profile: &UserProfile, new_mvec: &EmotionVector) -> UserProfile {
    let c = profile.watch_count as f64;
    let mut w = [0.0; 7];
    for (i, slot) in w.iter_mut().enumerate() {
        *slot = (profile.uvec.weights()[i] * c + new_mvec.weights()[i]) / (c + 1.0);
    }
    UserProfile {
        user_id: profile.user_id,
        uvec: EmotionVector::from_raw_unchecked(w),
        watch_count: profile.watch_count + 1,
    }
}

impl UserProfile {
    pub fn from_mvecs(user_id: UserId, mvecs: &[EmotionVector]) -> Result<Self> {
        Ok(Self {
            user_id,
            uvec: user_uvec(mvecs)?,
            watch_count: mvecs.len() as u64,
        })
    }
}

/// Profile over a watch history, skipping movies without an mvec.
///
/// Returns the profile (absent when no watched movie has an mvec) and the
/// number of excluded movies.
pub fn profile_from_history<'a>(
    user_id: UserId,
    watched: impl IntoIterator<Item = &'a MovieId>,
    mvecs: &BTreeMap<MovieId, EmotionVector>,
) -> (Option<UserProfile>, usize) {
    let mut found = Vec::new();
    let mut excluded = 0;
    for m in watched {
        match mvecs.get(m) {
            Some(v) => found.push(*v),
            None => excluded += 1,
        }
    }
    (UserProfile::from_mvecs(user_id, &found).ok(), excluded)
}

/// `userId,watch_count,u_neutral,...,u_surprise`
pub fn write_uvec_csv<'a, W: Write>(
    writer: W,
    profiles: impl IntoIterator<Item = &'a UserProfile>,
) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    wtr.write_record([
        "userId",
        "watch_count",
        "u_neutral",
        "u_joy",
        "u_sadness",
        "u_hate",
        "u_anger",
        "u_disgust",
        "u_surprise",
    ])
    .map_err(|e| Error::csv("uvecs", e))?;
    for p in profiles {
        let mut rec = vec![p.user_id.to_string(), p.watch_count.to_string()];
        rec.extend(p.uvec.weights().iter().map(|w| w.to_string()));
        wtr.write_record(&rec).map_err(|e| Error::csv("uvecs", e))?;
    }
    wtr.flush().map_err(|e| Error::io("uvecs", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{EmotionClass, SynonymLexicon};
    use crate::emotion::LexiconClassifier;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_simplex(rng: &mut impl Rng) -> EmotionVector {
        let w: [f64; 7] = std::array::from_fn(|_| rng.random::<f64>() + 1e-6);
        EmotionVector::from_weights(w).unwrap()
    }

    fn simplex() -> impl Strategy<Value = EmotionVector> {
        proptest::array::uniform7(0.0f64..1.0)
            .prop_filter("nonzero", |w| w.iter().sum::<f64>() > 1e-6)
            .prop_map(|w| EmotionVector::from_weights(w).unwrap())
    }

    #[test]
    fn empty_overview_is_neutral() {
        let clf = LexiconClassifier::new(&SynonymLexicon::new(), 1.0).unwrap();
        assert_eq!(movie_mvec("", &clf), EmotionVector::neutral());
    }

    #[test]
    fn five_anger_five_joy() {
        let mut lex = SynonymLexicon::new();
        for t in ["rage", "fury", "wrath", "ire", "outrage"] {
            lex.insert(EmotionClass::Anger, t).unwrap();
        }
        for t in ["glee", "bliss", "delight", "elation", "mirth"] {
            lex.insert(EmotionClass::Joy, t).unwrap();
        }
        let clf = LexiconClassifier::new(&lex, 1.0).unwrap();
        let v = movie_mvec(
            "A story of rage and glee, fury, bliss; wrath meets delight as ire fades to elation and outrage to mirth.",
            &clf,
        );
        assert!((v[EmotionClass::Neutral] - 1.0 / 11.0).abs() < 1e-15);
        assert!((v[EmotionClass::Joy] - 5.0 / 11.0).abs() < 1e-15);
        assert!((v[EmotionClass::Anger] - 5.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn mean_of_one_and_two() {
        let a = EmotionVector::basis(EmotionClass::Neutral);
        let b = EmotionVector::basis(EmotionClass::Joy);
        assert_eq!(user_uvec(&[a]).unwrap(), a);
        let m = user_uvec(&[a, b]).unwrap();
        assert_eq!(m.weights(), &[0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(user_uvec(&[]).is_err());
    }

    #[test]
    fn mean_of_eight_matches_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(400);
        let mvecs: Vec<_> = (0..8).map(|_| random_simplex(&mut rng)).collect();
        let u = user_uvec(&mvecs).unwrap();
        for c in 0..7 {
            let mut s = 0.0;
            for v in &mvecs {
                s += v.weights()[c];
            }
            assert!((u.weights()[c] - s / 8.0).abs() < 1e-15);
        }
    }

    #[test]
    fn update_fixed_point_and_step() {
        let p = UserProfile::from_mvecs(UserId(1), &[EmotionVector::basis(EmotionClass::Neutral)]).unwrap();
        let q = update_uvec(&p, &EmotionVector::basis(EmotionClass::Joy));
        assert_eq!(q.watch_count, 2);
        assert_eq!(q.uvec.weights(), &[0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0]);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = random_simplex(&mut rng);
        let p = UserProfile { user_id: UserId(1), uvec: v, watch_count: 5 };
        let q = update_uvec(&p, &v);
        for i in 0..7 {
            assert!((q.uvec.weights()[i] - v.weights()[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn fifty_updates_match_batch() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let mvecs: Vec<_> = (0..50).map(|_| random_simplex(&mut rng)).collect();
        let mut p = UserProfile::from_mvecs(UserId(7), &mvecs[..1]).unwrap();
        for v in &mvecs[1..] {
            p = update_uvec(&p, v);
        }
        let batch = user_uvec(&mvecs).unwrap();
        assert_eq!(p.watch_count, 50);
        for i in 0..7 {
            assert!((p.uvec.weights()[i] - batch.weights()[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn history_skips_missing_mvecs() {
        let mut mvecs = BTreeMap::new();
        mvecs.insert(MovieId(1), EmotionVector::basis(EmotionClass::Hate));
        let (p, excluded) = profile_from_history(UserId(3), &[MovieId(1), MovieId(2), MovieId(3)], &mvecs);
        assert_eq!(excluded, 2);
        let p = p.unwrap();
        assert_eq!(p.watch_count, 1);
        assert_eq!(p.uvec, EmotionVector::basis(EmotionClass::Hate));
        let (none, excluded) = profile_from_history(UserId(3), &[MovieId(9)], &mvecs);
        assert!(none.is_none());
        assert_eq!(excluded, 1);
    }

    #[test]
    fn uvec_csv_header() {
        let p = UserProfile::from_mvecs(UserId(400), &[EmotionVector::neutral()]).unwrap();
        let mut buf = Vec::new();
        write_uvec_csv(&mut buf, [&p]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "userId,watch_count,u_neutral,u_joy,u_sadness,u_hate,u_anger,u_disgust,u_surprise\n400,1,1,0,0,0,0,0,0\n"
        );
    }

    proptest! {
        #[test]
        fn mean_stays_on_simplex(vs in proptest::collection::vec(simplex(), 1..40)) {
            let u = user_uvec(&vs).unwrap();
            prop_assert!(u.weights().iter().all(|w| *w >= 0.0));
            prop_assert!((u.sum() - 1.0).abs() <= 1e-9);
        }

        #[test]
        fn mean_is_permutation_invariant(vs in proptest::collection::vec(simplex(), 1..20), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            let mut shuffled = vs.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let a = user_uvec(&vs).unwrap();
            let b = user_uvec(&shuffled).unwrap();
            for i in 0..7 {
                prop_assert!((a.weights()[i] - b.weights()[i]).abs() < 1e-14);
            }
        }

        #[test]
        fn incremental_equals_batch(vs in proptest::collection::vec(simplex(), 1..60)) {
            let mut p = UserProfile::from_mvecs(UserId(1), &vs[..1]).unwrap();
            for v in &vs[1..] {
                p = update_uvec(&p, v);
                prop_assert!((p.uvec.sum() - 1.0).abs() <= 1e-9);
            }
            let b = user_uvec(&vs).unwrap();
            for i in 0..7 {
                prop_assert!((p.uvec.weights()[i] - b.weights()[i]).abs() <= 1e-12);
            }
        }
    }
}
