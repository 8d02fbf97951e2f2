//! Interest extraction: sparse class-weight profiles for users, items, and
//! categories, familiarity over the social graph, potential interests, and
//! the similarity/fondness indicators used by the grading functions.
//!
//! Class-weight vectors are indexed by mined keyword class and stored
//! sparsely; distances and dot products are computed over the union of the
//! non-zero support without materializing dense vectors.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::dataset::{CategoryId, CategoryPath, Dataset, UserId, WeightedKeywordSet};
use crate::error::{Error, Result};
use crate::mining::{ClassId, KeywordClassSet};
use crate::taxonomy::{Taxonomy, UserClass};

/// Saturation constant of the fondness function.
pub const FOND_SATURATION: f64 = 100.0;

// ---------------------------------------------------------------------------
// Class weights
// ---------------------------------------------------------------------------

/// Sparse keyword-class -> weight vector. Zero entries are not stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassWeights {
    entries: BTreeMap<ClassId, f64>,
}

impl ClassWeights {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn weight(&self, class: ClassId) -> f64 {
        self.entries.get(&class).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, class: ClassId) -> bool {
        self.entries.contains_key(&class)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClassId, f64)> + '_ {
        self.entries.iter().map(|(&c, &w)| (c, w))
    }

    pub fn classes(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    fn insert(&mut self, class: ClassId, weight: f64) {
        debug_assert!(weight >= 0.0);
        if weight > 0.0 {
            self.entries.insert(class, weight);
        }
    }

    fn add(&mut self, class: ClassId, weight: f64) {
        debug_assert!(weight >= 0.0);
        if weight > 0.0 {
            *self.entries.entry(class).or_insert(0.0) += weight;
        }
    }

    /// Merge-join over the union of the two supports, in class order, so
    /// accumulation order (and thus the rounded result) is symmetric.
    fn merged<'a>(
        &'a self,
        other: &'a ClassWeights,
    ) -> impl Iterator<Item = (f64, f64)> + 'a {
        let mut left = self.entries.iter().peekable();
        let mut right = other.entries.iter().peekable();
        std::iter::from_fn(move || match (left.peek(), right.peek()) {
            (Some(&(&lc, &lw)), Some(&(&rc, &rw))) => match lc.cmp(&rc) {
                std::cmp::Ordering::Less => {
                    left.next();
                    Some((lw, 0.0))
                }
                std::cmp::Ordering::Greater => {
                    right.next();
                    Some((0.0, rw))
                }
                std::cmp::Ordering::Equal => {
                    left.next();
                    right.next();
                    Some((lw, rw))
                }
            },
            (Some(&(_, &lw)), None) => {
                left.next();
                Some((lw, 0.0))
            }
            (None, Some(&(_, &rw))) => {
                right.next();
                Some((0.0, rw))
            }
            (None, None) => None,
        })
    }

    /// Sparse dot product over the shared support.
    pub fn dot(&self, other: &ClassWeights) -> f64 {
        self.merged(other).map(|(a, b)| a * b).sum()
    }

    /// Euclidean norm of the sparse difference (absent entries count as 0).
    pub fn distance(&self, other: &ClassWeights) -> f64 {
        self.merged(other)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// True when the two vectors have at least one class in common.
    pub fn shares_class(&self, other: &ClassWeights) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.classes().any(|c| large.contains(c))
    }
}

impl FromIterator<(ClassId, f64)> for ClassWeights {
    fn from_iter<T: IntoIterator<Item = (ClassId, f64)>>(iter: T) -> Self {
        let mut out = ClassWeights::empty();
        for (c, w) in iter {
            out.add(c, w);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Configuration newtypes
// ---------------------------------------------------------------------------

/// Weights of the at/retweet/comment indicators in the familiarity function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamiliarityWeights {
    at: f64,
    retweet: f64,
    comment: f64,
}

impl FamiliarityWeights {
    pub fn new(at: f64, retweet: f64, comment: f64) -> Result<Self> {
        if at < 0.0 || retweet < 0.0 || comment < 0.0 {
            return Err(Error::InvalidInput(
                "familiarity weights must be non-negative".into(),
            ));
        }
        if ((at + retweet + comment) - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "familiarity weights must sum to 1, got {}",
                at + retweet + comment
            )));
        }
        Ok(FamiliarityWeights {
            at,
            retweet,
            comment,
        })
    }

    pub fn at(&self) -> f64 {
        self.at
    }

    pub fn retweet(&self) -> f64 {
        self.retweet
    }

    pub fn comment(&self) -> f64 {
        self.comment
    }
}

impl Default for FamiliarityWeights {
    /// Equal thirds: at, retweet and comment carry the same proportion.
    fn default() -> Self {
        FamiliarityWeights {
            at: 1.0 / 3.0,
            retweet: 1.0 / 3.0,
            comment: 1.0 / 3.0,
        }
    }
}

/// Maximum level of the followee search. 0 disables potential interests;
/// 3 is the largest useful depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SearchDepth(u32);

impl SearchDepth {
    pub const DISABLED: SearchDepth = SearchDepth(0);
    pub const ACTIVE_DEFAULT: SearchDepth = SearchDepth(1);
    pub const INACTIVE_DEFAULT: SearchDepth = SearchDepth(2);

    pub fn new(depth: u32) -> Result<Self> {
        if depth > 3 {
            return Err(Error::InvalidInput(format!(
                "search depth must be at most 3, got {depth}"
            )));
        }
        Ok(SearchDepth(depth))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Followee search depth per user class; fake users never search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthPolicy {
    pub active: SearchDepth,
    pub inactive: SearchDepth,
}

impl Default for DepthPolicy {
    fn default() -> Self {
        DepthPolicy {
            active: SearchDepth::ACTIVE_DEFAULT,
            inactive: SearchDepth::INACTIVE_DEFAULT,
        }
    }
}

// ---------------------------------------------------------------------------
// Scalar functions
// ---------------------------------------------------------------------------

/// `f(x) = 2 / (1 + e^-x) - 1`: 0 at 0, saturating towards 1.
pub fn sigmoid_f(x: f64) -> f64 {
    2.0 / (1.0 + (-x).exp()) - 1.0
}

/// Rank normalization `n(x) = (1 + e) / (1 + e^x)`, clamped above at 1 so
/// distance inputs below 1 stay inside (0, 1].
pub fn rank_norm(x: f64) -> f64 {
    ((1.0 + std::f64::consts::E) / (1.0 + x.exp())).min(1.0)
}

/// `g(x, y) = 2(1+e^-y) / ((1-e^-y)(1+e^-xy)) - (1+e^-y)/(1-e^-y)`:
/// 0 at x=0, 1 at x=1, strictly increasing in x. Requires y > 0.
pub fn saturating_g(x: f64, y: f64) -> Result<f64> {
    if y <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "saturation parameter must be positive, got {y}"
        )));
    }
    let ey = (-y).exp();
    let exy = (-x * y).exp();
    Ok(2.0 * (1.0 + ey) / ((1.0 - ey) * (1.0 + exy)) - (1.0 + ey) / (1.0 - ey))
}

/// Familiarity of two users from their direct interaction counts:
/// `w1 f(at) + w2 f(retweet) + w3 f(comment)`.
pub fn familiarity(
    counts: &crate::dataset::InteractionCounts,
    weights: &FamiliarityWeights,
) -> f64 {
    familiarity_from_counts(counts.at, counts.retweet, counts.comment, weights)
}

fn familiarity_from_counts(
    at: u64,
    retweet: u64,
    comment: u64,
    weights: &FamiliarityWeights,
) -> f64 {
    weights.at * sigmoid_f(at as f64)
        + weights.retweet * sigmoid_f(retweet as f64)
        + weights.comment * sigmoid_f(comment as f64)
}

/// Fondness of a user for a category: the saturating g of the sparse dot
/// product of their class-weight vectors, clamped to [0, 1].
pub fn fondness(user_weights: &ClassWeights, category_weights: &ClassWeights) -> f64 {
    let dot = user_weights.dot(category_weights);
    saturating_g(dot, FOND_SATURATION)
        .expect("FOND_SATURATION is positive")
        .clamp(0.0, 1.0)
}

/// Similarity of two class-weight vectors: the normalized Euclidean
/// distance `n(|a - b|)`, 1 for identical vectors.
pub fn similarity(a: &ClassWeights, b: &ClassWeights) -> f64 {
    rank_norm(a.distance(b))
}

// ---------------------------------------------------------------------------
// Profile construction
// ---------------------------------------------------------------------------

/// Per-class sum of the entity's weights of the keywords in each class.
/// Classes that do not intersect the keyword set are absent.
pub fn key_class(keywords: &WeightedKeywordSet, classes: &KeywordClassSet) -> ClassWeights {
    let mut out = ClassWeights::empty();
    for (id, class) in classes.iter() {
        let w: f64 = keywords
            .iter()
            .filter(|(k, _)| class.contains(*k))
            .map(|(_, w)| w)
            .sum();
        out.insert(id, w);
    }
    out
}

/// Keyword classes of a full category path: each class weight is averaged
/// over the items of the category that carry it.
pub fn kh_map(
    category: &CategoryPath,
    dataset: &Dataset,
    classes: &KeywordClassSet,
) -> ClassWeights {
    let Some(id) = dataset.category_id(category) else {
        return ClassWeights::empty();
    };
    let mut sums: BTreeMap<ClassId, (f64, u32)> = BTreeMap::new();
    for &item in dataset.items_in_category(id) {
        let weights = key_class(&dataset.item(item).expect("indexed item").keywords, classes);
        for (class, w) in weights.iter() {
            let entry = sums.entry(class).or_insert((0.0, 0));
            entry.0 += w;
            entry.1 += 1;
        }
    }
    sums.into_iter()
        .map(|(class, (sum, n))| (class, sum / f64::from(n)))
        .collect()
}

/// Followees and indirect followees of `user` up to `depth` hops, each with
/// the familiarity taken from the direct interaction row between `user` and
/// the reached user (0 when there is none). Never contains `user` itself.
pub fn related_users(
    dataset: &Dataset,
    user: UserId,
    depth: SearchDepth,
    weights: &FamiliarityWeights,
) -> BTreeMap<UserId, f64> {
    let mut out = BTreeMap::new();
    let mut visited: BTreeSet<UserId> = BTreeSet::new();
    visited.insert(user);
    let mut queue: VecDeque<(UserId, u32)> = VecDeque::new();
    queue.push_back((user, 0));
    while let Some((current, level)) = queue.pop_front() {
        if level == depth.get() {
            continue;
        }
        for followee in dataset.followees(current) {
            if !visited.insert(followee) {
                continue;
            }
            let fami = dataset
                .interaction(user, followee)
                .map(|c| familiarity(c, weights))
                .unwrap_or(0.0);
            out.insert(followee, fami);
            queue.push_back((followee, level + 1));
        }
    }
    out
}

/// Potential interests inherited from related users: the familiarity-scaled
/// sum of their own keyword-class weights.
pub fn potential_key(
    user: UserId,
    dataset: &Dataset,
    classes: &KeywordClassSet,
    weights: &FamiliarityWeights,
    depth: SearchDepth,
) -> ClassWeights {
    let mut out = ClassWeights::empty();
    for (related, fami) in related_users(dataset, user, depth, weights) {
        if fami == 0.0 {
            continue;
        }
        if let Some(record) = dataset.user(related) {
            for (class, w) in key_class(&record.keywords, classes).iter() {
                out.add(class, w * fami);
            }
        }
    }
    out
}

/// Merge own and potential interests: classes present in both get the
/// arithmetic mean of the two weights, the rest keep their single weight.
pub fn merge_interests(own: &ClassWeights, potential: &ClassWeights) -> ClassWeights {
    let mut out = ClassWeights::empty();
    for (class, w) in own.iter() {
        if potential.contains(class) {
            out.insert(class, 0.5 * (w + potential.weight(class)));
        } else {
            out.insert(class, w);
        }
    }
    for (class, w) in potential.iter() {
        if !own.contains(class) {
            out.insert(class, w);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Prebuilt indexes
// ---------------------------------------------------------------------------

/// Class weights of every item and every category, built once and then
/// shared read-only.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InterestIndex {
    item_weights: BTreeMap<UserId, ClassWeights>,
    category_weights: BTreeMap<CategoryId, ClassWeights>,
    empty: ClassWeights,
}

impl InterestIndex {
    pub fn build(dataset: &Dataset, classes: &KeywordClassSet) -> Self {
        let item_weights: BTreeMap<UserId, ClassWeights> = dataset
            .items()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|item| (item.id, key_class(&item.keywords, classes)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();

        let category_weights: BTreeMap<CategoryId, ClassWeights> = dataset
            .categories()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(id, path)| (id, kh_map(path, dataset, classes)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();

        InterestIndex {
            item_weights,
            category_weights,
            empty: ClassWeights::empty(),
        }
    }

    pub fn item_weights(&self, item: UserId) -> &ClassWeights {
        self.item_weights.get(&item).unwrap_or(&self.empty)
    }

    pub fn category_weights(&self, category: CategoryId) -> &ClassWeights {
        self.category_weights.get(&category).unwrap_or(&self.empty)
    }

    pub fn categories(&self) -> impl Iterator<Item = (CategoryId, &ClassWeights)> {
        self.category_weights.iter().map(|(&c, w)| (c, w))
    }
}

/// A user's extracted interests.
#[derive(Debug, Clone, PartialEq)]
pub struct UserProfile {
    pub class: UserClass,
    /// Keyword-class weights from the user's own keywords.
    pub own: ClassWeights,
    /// Own merged with potential interests; equal to `own` for fake users.
    pub merged: ClassWeights,
}

/// Interests of every user, built once per pipeline run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileSet {
    profiles: BTreeMap<UserId, UserProfile>,
}

impl ProfileSet {
    pub fn get(&self, user: UserId) -> Option<&UserProfile> {
        self.profiles.get(&user)
    }

    pub fn iter(&self) -> impl Iterator<Item = (UserId, &UserProfile)> {
        self.profiles.iter().map(|(&u, p)| (u, p))
    }
}

/// Build the merged interest profile of one user.
pub fn build_profile(
    user: UserId,
    dataset: &Dataset,
    classes: &KeywordClassSet,
    taxonomy: &Taxonomy,
    weights: &FamiliarityWeights,
    depths: &DepthPolicy,
) -> Result<UserProfile> {
    let record = dataset.user(user).ok_or(Error::UnknownUser(user))?;
    let class = taxonomy
        .class(user)
        .ok_or(Error::UnknownUser(user))?;
    let own = key_class(&record.keywords, classes);
    let merged = match class {
        // Fake users get no potential interests.
        UserClass::Fake => own.clone(),
        UserClass::Active | UserClass::Inactive => {
            let depth = match class {
                UserClass::Active => depths.active,
                _ => depths.inactive,
            };
            let potential = potential_key(user, dataset, classes, weights, depth);
            merge_interests(&own, &potential)
        }
    };
    Ok(UserProfile { class, own, merged })
}

/// Build profiles for every user in parallel.
pub fn build_profiles(
    dataset: &Dataset,
    classes: &KeywordClassSet,
    taxonomy: &Taxonomy,
    weights: &FamiliarityWeights,
    depths: &DepthPolicy,
) -> ProfileSet {
    let ids: Vec<UserId> = dataset.users().map(|u| u.id).collect();
    let profiles = ids
        .par_iter()
        .map(|&u| {
            let profile = build_profile(u, dataset, classes, taxonomy, weights, depths)
                .expect("profiles built over the corpus' own users");
            (u, profile)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    ProfileSet { profiles }
}
