//! User taxonomy: every user is active, inactive, or fake.
//!
//! Activeness is the tweet count gated by the interaction threshold:
//! `act(u) = tweet * (1 + sgn(at + retweet + comment - min_action)) / 2`.
//! Users at or above `min_activeness` are active, users with positive but
//! smaller activeness are inactive, and users with zero activeness are fake
//! (spammers and indirect-only posters). The gate function is named after
//! the historical `is_fake` formula even though 1 means "real".

use std::collections::BTreeMap;
use std::fmt;

use crate::dataset::{Dataset, UserId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxonomyConfig {
    pub min_activeness: u64,
    pub min_action: u64,
}

impl Default for TaxonomyConfig {
    fn default() -> Self {
        TaxonomyConfig {
            min_activeness: 100,
            min_action: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UserClass {
    Active,
    Inactive,
    Fake,
}

impl UserClass {
    pub const ALL: [UserClass; 3] = [UserClass::Active, UserClass::Inactive, UserClass::Fake];

    pub fn as_str(self) -> &'static str {
        match self {
            UserClass::Active => "active",
            UserClass::Inactive => "inactive",
            UserClass::Fake => "fake",
        }
    }
}

impl fmt::Display for UserClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl std::str::FromStr for UserClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "active" => Ok(UserClass::Active),
            "inactive" => Ok(UserClass::Inactive),
            "fake" => Ok(UserClass::Fake),
            other => Err(Error::InvalidInput(format!("unknown user class {other:?}"))),
        }
    }
}

/// The `(1 + sgn(interactions - min_action)) / 2` gate: 1 above the
/// threshold, 1/2 exactly at it, 0 below.
pub fn interaction_gate(interactions: u64, min_action: u64) -> f64 {
    match interactions.cmp(&min_action) {
        std::cmp::Ordering::Greater => 1.0,
        std::cmp::Ordering::Equal => 0.5,
        std::cmp::Ordering::Less => 0.0,
    }
}

/// Tweet count gated by the interaction threshold.
pub fn activeness(tweet_count: u64, interactions: u64, config: &TaxonomyConfig) -> f64 {
    tweet_count as f64 * interaction_gate(interactions, config.min_action)
}

fn class_of(act: f64, config: &TaxonomyConfig) -> UserClass {
    if act >= config.min_activeness as f64 {
        UserClass::Active
    } else if act > 0.0 {
        UserClass::Inactive
    } else {
        UserClass::Fake
    }
}

/// Classify one user; interactions are the user's outgoing at+retweet+comment
/// totals.
pub fn classify_user(
    user: UserId,
    dataset: &Dataset,
    config: &TaxonomyConfig,
) -> Result<UserClass> {
    let record = dataset.user(user).ok_or(Error::UnknownUser(user))?;
    let interactions = dataset.outgoing_interaction_total(user);
    Ok(class_of(
        activeness(record.tweet_count, interactions, config),
        config,
    ))
}

/// Per-user class and activeness for a whole corpus.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Taxonomy {
    entries: BTreeMap<UserId, (UserClass, f64)>,
}

impl Taxonomy {
    pub fn class(&self, user: UserId) -> Option<UserClass> {
        self.entries.get(&user).map(|&(class, _)| class)
    }

    pub fn activeness(&self, user: UserId) -> Option<f64> {
        self.entries.get(&user).map(|&(_, act)| act)
    }

    pub fn iter(&self) -> impl Iterator<Item = (UserId, UserClass, f64)> + '_ {
        self.entries
            .iter()
            .map(|(&id, &(class, act))| (id, class, act))
    }

    pub fn count(&self, class: UserClass) -> usize {
        self.entries.values().filter(|&&(c, _)| c == class).count()
    }
}

/// Classify every user in the corpus.
pub fn classify_all(dataset: &Dataset, config: &TaxonomyConfig) -> Taxonomy {
    let entries = dataset
        .users()
        .map(|u| {
            let act = activeness(
                u.tweet_count,
                dataset.outgoing_interaction_total(u.id),
                config,
            );
            (u.id, (class_of(act, config), act))
        })
        .collect();
    Taxonomy { entries }
}
