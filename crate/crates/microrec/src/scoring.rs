//! Popularity ranking, candidate selection and the grading functions that
//! turn interest profiles into ordered top-k recommendations.
//!
//! Active and inactive users are graded by
//! `2 * fond * (a1 * hot + a2 * sim) - 1`, optionally damped by the time
//! factor of their latest acceptance in the item's category. Fake users are
//! graded by `(1 + fond) * HOT - 1` over the global popularity rank.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::dataset::{CategoryId, Dataset, RecLogRecord, UserId};
use crate::error::{Error, Result};
use crate::interest::{
    fondness, rank_norm, similarity, ClassWeights, InterestIndex, ProfileSet, UserProfile,
};
use crate::taxonomy::UserClass;

pub const SECONDS_PER_DAY: f64 = 86_400.0;

// ---------------------------------------------------------------------------
// Popularity
// ---------------------------------------------------------------------------

/// Normalized 1-based popularity ranks: per category (`hot`) and over the
/// whole item set (`HOT`). Ranks are by descending follower count with ties
/// broken by ascending item id, then passed through the rank normalization.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PopularityIndex {
    category_hot: BTreeMap<UserId, f64>,
    global_hot: BTreeMap<UserId, f64>,
}

impl PopularityIndex {
    /// Per-category normalized rank of the item.
    pub fn hot(&self, item: UserId) -> Option<f64> {
        self.category_hot.get(&item).copied()
    }

    /// Global normalized rank of the item.
    pub fn global_hot(&self, item: UserId) -> Option<f64> {
        self.global_hot.get(&item).copied()
    }
}

fn ranked(mut items: Vec<(UserId, u64)>) -> impl Iterator<Item = (UserId, f64)> {
    items.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    items
        .into_iter()
        .enumerate()
        .map(|(idx, (id, _))| (id, rank_norm((idx + 1) as f64)))
}

/// Rank every item by follower count, per category and globally.
pub fn build_popularity(dataset: &Dataset) -> PopularityIndex {
    let mut category_hot = BTreeMap::new();
    for (category, _) in dataset.categories() {
        let members: Vec<(UserId, u64)> = dataset
            .items_in_category(category)
            .iter()
            .map(|&id| (id, dataset.item(id).expect("indexed item").follower_count))
            .collect();
        category_hot.extend(ranked(members));
    }
    let all: Vec<(UserId, u64)> = dataset
        .items()
        .map(|item| (item.id, item.follower_count))
        .collect();
    let global_hot = ranked(all).collect();
    PopularityIndex {
        category_hot,
        global_hot,
    }
}

// ---------------------------------------------------------------------------
// Grading parameters
// ---------------------------------------------------------------------------

pub const DEFAULT_ACTIVE_ALPHA1: f64 = 0.33;
pub const DEFAULT_INACTIVE_ALPHA1: f64 = 0.18;
pub const DEFAULT_LAMBDA: f64 = 2.0;

/// Weight of popularity against similarity in the grade, plus the recency
/// proportion of the time decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradingParams {
    alpha1: f64,
    lambda: f64,
}

impl GradingParams {
    pub fn new(alpha1: f64, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha1) {
            return Err(Error::InvalidInput(format!(
                "alpha1 must lie in [0, 1], got {alpha1}"
            )));
        }
        if lambda.is_nan() || lambda <= 1.0 {
            return Err(Error::InvalidInput(format!(
                "lambda must exceed 1, got {lambda}"
            )));
        }
        Ok(GradingParams { alpha1, lambda })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        1.0 - self.alpha1
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Grading parameters per user class. Fake users take no parameters, so
/// only the active and inactive entries exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassParams {
    pub active: GradingParams,
    pub inactive: GradingParams,
}

impl ClassParams {
    pub fn for_class(&self, class: UserClass) -> &GradingParams {
        match class {
            UserClass::Inactive => &self.inactive,
            // The fake grading path never reads these.
            UserClass::Active | UserClass::Fake => &self.active,
        }
    }
}

impl Default for ClassParams {
    fn default() -> Self {
        ClassParams {
            active: GradingParams::new(DEFAULT_ACTIVE_ALPHA1, DEFAULT_LAMBDA).unwrap(),
            inactive: GradingParams::new(DEFAULT_INACTIVE_ALPHA1, DEFAULT_LAMBDA).unwrap(),
        }
    }
}

// ---------------------------------------------------------------------------
// Grading functions
// ---------------------------------------------------------------------------

fn check_unit(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidInput(format!(
            "{name} must lie in [0, 1], got {value}"
        )));
    }
    Ok(())
}

/// `2 * fond * (a1 * hot + a2 * sim) - 1`, bounded in [-1, 1].
pub fn grade(fond: f64, hot: f64, sim: f64, params: &GradingParams) -> Result<f64> {
    check_unit("fond", fond)?;
    check_unit("hot", hot)?;
    check_unit("sim", sim)?;
    let mixed = params.alpha1() * hot + params.alpha2() * sim;
    Ok((2.0 * fond * mixed - 1.0).clamp(-1.0, 1.0))
}

/// `time(t) = 1 + (lambda - 1) e^t` for `t <= 0` in days relative to the
/// reference time; "no acceptance" is `t = -inf`, which yields 1.
pub fn time_factor(t_days: f64, lambda: f64) -> Result<f64> {
    if t_days > 0.0 {
        return Err(Error::InvalidInput(format!(
            "time offset must be non-positive, got {t_days}"
        )));
    }
    Ok(1.0 + (lambda - 1.0) * t_days.exp())
}

/// `(1 / lambda) * time * grade`: equals the grade at t = 0 and decays to
/// `grade / lambda` when the category was never accepted.
pub fn revised_grade(grade_value: f64, time_value: f64, lambda: f64) -> f64 {
    debug_assert!(grade_value.abs() <= 1.0 + 1e-12);
    debug_assert!((1.0..=lambda + 1e-12).contains(&time_value));
    (1.0 / lambda) * time_value * grade_value
}

/// Fake-user grade `(1 + fond) * HOT - 1`, emphasizing global popularity.
pub fn fake_grade(fond: f64, global_hot: f64) -> Result<f64> {
    check_unit("fond", fond)?;
    check_unit("global hot", global_hot)?;
    Ok(((1.0 + fond) * global_hot - 1.0).clamp(-1.0, 1.0))
}

// ---------------------------------------------------------------------------
// Acceptance history (time decay)
// ---------------------------------------------------------------------------

/// Latest acceptance timestamp per (user, category), with the reference
/// time the decay is measured from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AcceptanceHistory {
    latest: BTreeMap<(UserId, CategoryId), i64>,
    reference_time: i64,
}

impl AcceptanceHistory {
    /// Collect acceptances from `records`; the reference time is the newest
    /// timestamp seen (accepted or not).
    pub fn build(records: &[RecLogRecord], dataset: &Dataset) -> Self {
        let mut history = AcceptanceHistory::default();
        for r in records {
            history.reference_time = history.reference_time.max(r.timestamp);
            history.observe(r, dataset);
        }
        history
    }

    /// Record one accepted recommendation.
    pub fn observe(&mut self, record: &RecLogRecord, dataset: &Dataset) {
        if record.outcome != crate::dataset::Outcome::Accepted {
            return;
        }
        if let Some(item) = dataset.item(record.item) {
            let key = (record.user, item.category);
            let entry = self.latest.entry(key).or_insert(record.timestamp);
            *entry = (*entry).max(record.timestamp);
        }
    }

    pub fn reference_time(&self) -> i64 {
        self.reference_time
    }

    /// Days (non-positive) between the user's latest acceptance in the
    /// category and `now`; `None` when the category was never accepted.
    pub fn offset_days(&self, user: UserId, category: CategoryId, now: i64) -> Option<f64> {
        self.latest
            .get(&(user, category))
            .map(|&ts| ((ts - now) as f64 / SECONDS_PER_DAY).min(0.0))
    }
}

// ---------------------------------------------------------------------------
// Candidate selection and recommendation
// ---------------------------------------------------------------------------

/// Items of every category whose keyword classes intersect the user's
/// interests, minus the items the user already follows. Empty interests
/// yield an empty set; the fake-user path supplies the global-hot fallback.
pub fn candidate_items(
    user: UserId,
    interests: &ClassWeights,
    dataset: &Dataset,
    index: &InterestIndex,
) -> Vec<UserId> {
    if interests.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (category, weights) in index.categories() {
        if weights.shares_class(interests) {
            out.extend(
                dataset
                    .items_in_category(category)
                    .iter()
                    .copied()
                    .filter(|&item| !dataset.follows(user, item)),
            );
        }
    }
    out.sort();
    out.dedup();
    out
}

/// An ordered recommendation list: (item, grade) descending by grade with
/// ties broken by ascending item id, at most k entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub user: UserId,
    pub entries: Vec<(UserId, f64)>,
}

/// Read-only bundle of everything needed to grade items for users.
pub struct Recommender<'a> {
    pub dataset: &'a Dataset,
    pub profiles: &'a ProfileSet,
    pub index: &'a InterestIndex,
    pub popularity: &'a PopularityIndex,
    pub params: &'a ClassParams,
    /// Present when the revised (time-decayed) grade is in use.
    pub history: Option<&'a AcceptanceHistory>,
    pub k: usize,
}

impl<'a> Recommender<'a> {
    fn profile(&self, user: UserId) -> Result<&'a UserProfile> {
        self.profiles.get(user).ok_or(Error::UnknownUser(user))
    }

    /// Grade one item for one user along the class-appropriate path.
    pub fn grade_item(&self, user: UserId, profile: &UserProfile, item: UserId) -> Result<f64> {
        let record = self
            .dataset
            .item(item)
            .ok_or_else(|| Error::InvalidInput(format!("unknown item {item}")))?;
        let category_weights = self.index.category_weights(record.category);
        match profile.class {
            UserClass::Fake => {
                let fond = fondness(&profile.own, category_weights);
                let hot = self
                    .popularity
                    .global_hot(item)
                    .expect("popularity covers all items");
                fake_grade(fond, hot)
            }
            UserClass::Active | UserClass::Inactive => {
                let params = self.params.for_class(profile.class);
                let fond = fondness(&profile.merged, category_weights);
                let hot = self
                    .popularity
                    .hot(item)
                    .expect("popularity covers all items");
                let sim = similarity(&profile.merged, self.index.item_weights(item));
                let g = grade(fond, hot, sim, params)?;
                match self.history {
                    None => Ok(g),
                    Some(history) => {
                        let factor = match history.offset_days(
                            user,
                            record.category,
                            history.reference_time(),
                        ) {
                            Some(t) => time_factor(t, params.lambda())?,
                            None => 1.0,
                        };
                        Ok(revised_grade(g, factor, params.lambda()))
                    }
                }
            }
        }
    }

    /// Grade a fixed candidate list and order it: grade descending, item id
    /// ascending on ties.
    pub fn grade_candidates(
        &self,
        user: UserId,
        candidates: &[UserId],
    ) -> Result<Vec<(UserId, f64)>> {
        let profile = self.profile(user)?;
        let mut graded = Vec::with_capacity(candidates.len());
        for &item in candidates {
            graded.push((item, self.grade_item(user, profile, item)?));
        }
        graded.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .expect("grades are finite")
                .then(a.0.cmp(&b.0))
        });
        Ok(graded)
    }

    /// Top-k recommendation for one user. Active and inactive users draw
    /// candidates from their merged interests; fake users fall back to the
    /// whole item set when their own keywords give no interests.
    pub fn recommend(&self, user: UserId) -> Result<Recommendation> {
        let profile = self.profile(user)?;
        let interests = match profile.class {
            UserClass::Fake => &profile.own,
            _ => &profile.merged,
        };
        let candidates = {
            let selected = candidate_items(user, interests, self.dataset, self.index);
            if selected.is_empty() && profile.class == UserClass::Fake {
                // Keyword-poor fake users get the global catalogue.
                self.dataset
                    .items()
                    .map(|i| i.id)
                    .filter(|&i| !self.dataset.follows(user, i))
                    .collect()
            } else {
                selected
            }
        };
        let mut entries = self.grade_candidates(user, &candidates)?;
        entries.truncate(self.k);
        Ok(Recommendation { user, entries })
    }

    /// Recommend for every user, in user-id order.
    pub fn recommend_all(&self) -> Result<Vec<Recommendation>> {
        let ids: Vec<UserId> = self.dataset.users().map(|u| u.id).collect();
        ids.par_iter().map(|&u| self.recommend(u)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::KeywordId;
    use crate::interest::{build_profiles, DepthPolicy, FamiliarityWeights};
    use crate::mining::{KeywordClass, KeywordClassSet};
    use crate::taxonomy::{classify_all, TaxonomyConfig};
    use crate::testutil::CorpusBuilder;
    use proptest::prelude::*;

    fn params(alpha1: f64) -> GradingParams {
        GradingParams::new(alpha1, 2.0).unwrap()
    }

    #[test]
    fn grading_params_validate() {
        assert!(GradingParams::new(0.5, 2.0).is_ok());
        assert!(GradingParams::new(-0.1, 2.0).is_err());
        assert!(GradingParams::new(1.1, 2.0).is_err());
        assert!(GradingParams::new(0.5, 1.0).is_err());
    }

    #[test]
    fn grade_examples() {
        let p = params(0.33);
        assert_eq!(grade(1.0, 1.0, 1.0, &p).unwrap(), 1.0);
        assert_eq!(grade(0.0, 0.3, 0.9, &p).unwrap(), -1.0);
        let g = grade(0.5, 0.443207, 1.0, &p).unwrap();
        assert!((g - (-0.18374169)).abs() < 1e-6, "got {g}");
        assert!(grade(1.2, 0.5, 0.5, &p).is_err());
        assert!(grade(0.5, -0.1, 0.5, &p).is_err());
        assert!(grade(0.5, 0.5, 2.0, &p).is_err());
    }

    #[test]
    fn time_factor_examples() {
        assert_eq!(time_factor(0.0, 2.0).unwrap(), 2.0);
        assert_eq!(time_factor(f64::NEG_INFINITY, 2.0).unwrap(), 1.0);
        assert!((time_factor(-1.0, 2.0).unwrap() - 1.3678794411714423).abs() < 1e-9);
        assert!(time_factor(0.5, 2.0).is_err());
    }

    #[test]
    fn revised_grade_examples() {
        // At t = 0 the lambda factors cancel exactly.
        assert_eq!(revised_grade(0.5, 2.0, 2.0), 0.5);
        // No acceptance: time factor 1 halves the grade.
        assert_eq!(revised_grade(0.5, 1.0, 2.0), 0.25);
        assert_eq!(revised_grade(0.0, 1.5, 2.0), 0.0);
    }

    #[test]
    fn fake_grade_examples() {
        assert_eq!(fake_grade(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(fake_grade(1.0, 1.0).unwrap(), 1.0);
        let g = fake_grade(0.0, 0.443207).unwrap();
        assert!((g - (-0.556793)).abs() < 1e-6);
        assert!(fake_grade(1.5, 0.5).is_err());
    }

    /// Corpus with two categories: items 20/21 in a.b (followers 10 and 5),
    /// item 22 in c.d (followers 0). User 1 follows item 20.
    fn scored_corpus() -> Dataset {
        CorpusBuilder::new()
            .user(1, 150)
            .user(2, 150)
            .user(3, 0)
            .user(20, 0)
            .user(21, 0)
            .user(22, 0)
            .keywords(1, "1:0.6;2:0.4")
            .keywords(2, "1:1")
            .item(20, "a.b", "1;2")
            .item(21, "a.b", "1")
            .item(22, "c.d", "3")
            .follow(1, 20)
            .follow(2, 20)
            .follow(2, 21)
            .action(1, 20, 30, 0, 0)
            .action(2, 20, 30, 0, 0)
            .build()
    }

    fn abc_classes() -> KeywordClassSet {
        KeywordClassSet::from_classes(vec![
            KeywordClass {
                keywords: [KeywordId(1), KeywordId(2)].into_iter().collect(),
                support: 0.3,
            },
            KeywordClass {
                keywords: [KeywordId(3)].into_iter().collect(),
                support: 0.3,
            },
        ])
    }

    #[test]
    fn popularity_ranks_and_ties() {
        let ds = scored_corpus();
        let pop = build_popularity(&ds);
        // a.b: item 20 (10 followers) ranks 1, item 21 (5) ranks 2.
        assert_eq!(pop.hot(UserId(20)), Some(1.0));
        assert!((pop.hot(UserId(21)).unwrap() - rank_norm(2.0)).abs() < 1e-12);
        // c.d has a single item.
        assert_eq!(pop.hot(UserId(22)), Some(1.0));
        // Globally: 20, 21, 22.
        assert_eq!(pop.global_hot(UserId(20)), Some(1.0));
        assert!((pop.global_hot(UserId(22)).unwrap() - rank_norm(3.0)).abs() < 1e-12);
    }

    #[test]
    fn popularity_tie_broken_by_item_id() {
        let ds = CorpusBuilder::new()
            .user(5, 0)
            .user(6, 0)
            .item(5, "a.b", "1")
            .item(6, "a.b", "1")
            .build();
        let pop = build_popularity(&ds);
        assert_eq!(pop.hot(UserId(5)), Some(1.0));
        assert!(pop.hot(UserId(6)).unwrap() < 1.0);
    }

    #[test]
    fn candidate_items_examples() {
        let ds = scored_corpus();
        let classes = abc_classes();
        let index = InterestIndex::build(&ds, &classes);

        let empty = ClassWeights::empty();
        assert!(candidate_items(UserId(1), &empty, &ds, &index).is_empty());

        // Class 0 maps to category a.b (items 20, 21); user 1 follows 20.
        let interests: ClassWeights =
            [(crate::mining::ClassId(0), 0.5)].into_iter().collect();
        assert_eq!(
            candidate_items(UserId(1), &interests, &ds, &index),
            vec![UserId(21)]
        );
        // User 3 follows nothing: both items qualify.
        assert_eq!(
            candidate_items(UserId(3), &interests, &ds, &index),
            vec![UserId(20), UserId(21)]
        );
    }

    fn recommender_parts(
        ds: &Dataset,
    ) -> (
        KeywordClassSet,
        crate::taxonomy::Taxonomy,
        InterestIndex,
        PopularityIndex,
    ) {
        let classes = abc_classes();
        let taxonomy = classify_all(ds, &TaxonomyConfig::default());
        let index = InterestIndex::build(ds, &classes);
        let popularity = build_popularity(ds);
        (classes, taxonomy, index, popularity)
    }

    #[test]
    fn fake_user_without_keywords_gets_global_hottest() {
        let ds = scored_corpus();
        let (classes, taxonomy, index, popularity) = recommender_parts(&ds);
        let profiles = build_profiles(
            &ds,
            &classes,
            &taxonomy,
            &FamiliarityWeights::default(),
            &DepthPolicy::default(),
        );
        let class_params = ClassParams::default();
        let rec = Recommender {
            dataset: &ds,
            profiles: &profiles,
            index: &index,
            popularity: &popularity,
            params: &class_params,
            history: None,
            k: 3,
        };
        // User 3 has no tweets -> fake, no keywords -> global fallback.
        let out = rec.recommend(UserId(3)).unwrap();
        let items: Vec<UserId> = out.entries.iter().map(|e| e.0).collect();
        assert_eq!(items, vec![UserId(20), UserId(21), UserId(22)]);
        // fake_grade(0, HOT) = HOT - 1: monotone in the global rank.
        assert!(out.entries[0].1 > out.entries[1].1);
        assert!(out.entries[1].1 > out.entries[2].1);
    }

    #[test]
    fn matching_user_gets_its_category_item_first() {
        let ds = scored_corpus();
        let (classes, taxonomy, index, popularity) = recommender_parts(&ds);
        let profiles = build_profiles(
            &ds,
            &classes,
            &taxonomy,
            &FamiliarityWeights::default(),
            &DepthPolicy::default(),
        );
        let class_params = ClassParams::default();
        let rec = Recommender {
            dataset: &ds,
            profiles: &profiles,
            index: &index,
            popularity: &popularity,
            params: &class_params,
            history: None,
            k: 3,
        };
        // User 1 (active, interests in class 0) follows 20 already; the
        // only candidate is 21.
        let out = rec.recommend(UserId(1)).unwrap();
        assert_eq!(out.entries.len(), 1);
        assert_eq!(out.entries[0].0, UserId(21));
        assert!(out.entries[0].1 > -1.0);
    }

    #[test]
    fn k_larger_than_candidates_shortens_list() {
        let ds = scored_corpus();
        let (classes, taxonomy, index, popularity) = recommender_parts(&ds);
        let profiles = build_profiles(
            &ds,
            &classes,
            &taxonomy,
            &FamiliarityWeights::default(),
            &DepthPolicy::default(),
        );
        let class_params = ClassParams::default();
        let rec = Recommender {
            dataset: &ds,
            profiles: &profiles,
            index: &index,
            popularity: &popularity,
            params: &class_params,
            history: None,
            k: 3,
        };
        // User 2 follows both a.b items; no candidates remain.
        let out = rec.recommend(UserId(2)).unwrap();
        assert!(out.entries.is_empty());
        assert!(rec.recommend(UserId(99)).is_err());
    }

    #[test]
    fn acceptance_history_tracks_latest_per_category() {
        let ds = scored_corpus();
        let records = vec![
            RecLogRecord {
                user: UserId(1),
                item: UserId(20),
                outcome: crate::dataset::Outcome::Accepted,
                timestamp: 86_400,
            },
            RecLogRecord {
                user: UserId(1),
                item: UserId(21),
                outcome: crate::dataset::Outcome::Accepted,
                timestamp: 2 * 86_400,
            },
            RecLogRecord {
                user: UserId(1),
                item: UserId(22),
                outcome: crate::dataset::Outcome::Rejected,
                timestamp: 3 * 86_400,
            },
        ];
        let history = AcceptanceHistory::build(&records, &ds);
        assert_eq!(history.reference_time(), 3 * 86_400);
        let cat_ab = ds.item(UserId(20)).unwrap().category;
        let cat_cd = ds.item(UserId(22)).unwrap().category;
        let t = history
            .offset_days(UserId(1), cat_ab, history.reference_time())
            .unwrap();
        assert!((t - (-1.0)).abs() < 1e-12); // latest acceptance 1 day back
        assert_eq!(
            history.offset_days(UserId(1), cat_cd, history.reference_time()),
            None
        );
    }

    proptest! {
        /// Both grading functions stay inside [-1, 1].
        #[test]
        fn grades_are_bounded(
            fond in 0.0f64..=1.0,
            hot in 0.0f64..=1.0,
            sim in 0.0f64..=1.0,
            alpha1 in 0.0f64..=1.0,
        ) {
            let p = params(alpha1);
            let g = grade(fond, hot, sim, &p).unwrap();
            prop_assert!((-1.0..=1.0).contains(&g));
            let fg = fake_grade(fond, hot).unwrap();
            prop_assert!((-1.0..=1.0).contains(&fg));
        }

        /// Both grades are monotone in each indicator; fake_grade collapses
        /// to HOT - 1 at zero fondness.
        #[test]
        fn grade_is_monotone(
            fond in 0.0f64..=1.0,
            hot in 0.0f64..=1.0,
            sim in 0.0f64..=1.0,
            alpha1 in 0.0f64..=1.0,
            bump in 0.0f64..=0.5,
        ) {
            let p = params(alpha1);
            let base = grade(fond, hot, sim, &p).unwrap();
            prop_assert!(grade((fond + bump).min(1.0), hot, sim, &p).unwrap() >= base - 1e-12);
            prop_assert!(grade(fond, (hot + bump).min(1.0), sim, &p).unwrap() >= base - 1e-12);
            prop_assert!(grade(fond, hot, (sim + bump).min(1.0), &p).unwrap() >= base - 1e-12);

            let fake = fake_grade(fond, hot).unwrap();
            prop_assert!(fake_grade((fond + bump).min(1.0), hot).unwrap() >= fake - 1e-12);
            prop_assert!(fake_grade(fond, (hot + bump).min(1.0)).unwrap() >= fake - 1e-12);
            prop_assert!((fake_grade(0.0, hot).unwrap() - (hot - 1.0)).abs() < 1e-12);
        }

        /// The revised grade never exceeds the plain grade in magnitude.
        #[test]
        fn revised_grade_magnitude_bounded(
            g in -1.0f64..=1.0,
            t in -50.0f64..=0.0,
        ) {
            let factor = time_factor(t, 2.0).unwrap();
            prop_assert!((1.0..=2.0).contains(&factor));
            prop_assert!(revised_grade(g, factor, 2.0).abs() <= g.abs() + 1e-12);
        }
    }
}
