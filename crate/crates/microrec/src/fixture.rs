//! Deterministic synthetic corpora for tests, examples and demos.
//!
//! `smallnet` is a 200-user microblog snapshot built around four keyword
//! topics. Each topic has four items in its own category and a hub user
//! whose keywords advertise the topic. Active users carry topic keywords
//! themselves; inactive users carry none but follow (and interact with)
//! their topic's hub, so their acceptances are predictable exactly through
//! the followee search. Fake users have no usable interaction history.
//!
//! `allfake` is a keywordless corpus whose users never interact, plus a few
//! follower bots that only exist to give the items distinct follower
//! counts.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::config::PipelineConfig;
use crate::dataset::{
    ITEM_FILE, REC_LOG_FILE, USER_ACTION_FILE, USER_KEY_WORD_FILE, USER_PROFILE_FILE,
    USER_SNS_FILE,
};
use crate::error::{Error, Result};

/// Generated TSV contents, one entry per input file.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureFiles {
    pub files: Vec<(&'static str, String)>,
}

impl FixtureFiles {
    /// Write every file into `dir`, creating it if needed.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|e| Error::io(path.display().to_string(), e))?;
        }
        Ok(())
    }
}

const DAY: i64 = 86_400;
const TOPICS: u64 = 4;

/// Keyword pair of a topic: (101,102), (103,104), ...
fn topic_keywords(topic: u64) -> (u64, u64) {
    (101 + 2 * topic, 102 + 2 * topic)
}

fn topic_category(topic: u64) -> &'static str {
    match topic {
        0 => "arts.music",
        1 => "sports.football",
        2 => "tech.mobile",
        _ => "life.cooking",
    }
}

/// Item `slot` (0..4) of a topic.
fn item_id(topic: u64, slot: u64) -> u64 {
    9000 + 4 * topic + slot
}

fn hub_id(topic: u64) -> u64 {
    201 + topic
}

/// The 200-user fixture: ids 1..=60 active, 61..=140 inactive (keywordless,
/// hub-linked), 141..=180 fake, 201..=204 topic hubs, 9000..=9015 items.
pub fn smallnet() -> FixtureFiles {
    let mut profile = String::new();
    let mut keywords = String::new();
    let mut items = String::new();
    let mut sns = String::new();
    let mut actions = String::new();
    let mut log = String::new();

    // Items: four per topic, keyword pair with uniform weights.
    for topic in 0..TOPICS {
        let (k1, k2) = topic_keywords(topic);
        for slot in 0..4 {
            let id = item_id(topic, slot);
            let _ = writeln!(profile, "{id}\t120");
            let _ = writeln!(items, "{id}\t{}\t{k1};{k2}", topic_category(topic));
        }
    }

    // Hubs: active users whose keywords advertise their topic; they follow
    // every item of the topic, which also seeds the follower counts.
    for topic in 0..TOPICS {
        let id = hub_id(topic);
        let (k1, k2) = topic_keywords(topic);
        let _ = writeln!(profile, "{id}\t150");
        let _ = writeln!(keywords, "{id}\t{k1}:0.5;{k2}:0.5");
        let _ = writeln!(actions, "{id}\t{}\t15\t10\t5", item_id(topic, 0));
        for slot in 0..4 {
            let _ = writeln!(sns, "{id}\t{}", item_id(topic, slot));
        }
        let _ = writeln!(log, "{id}\t{}\t1\t{}", item_id(topic, 1), 5 * DAY);
    }

    // Active users: own topic keywords, follow one popular item of their
    // topic plus the hub, and interact enough to clear the action gate.
    for id in 1..=60u64 {
        let topic = id % TOPICS;
        let (k1, k2) = topic_keywords(topic);
        let _ = writeln!(profile, "{id}\t{}", 100 + (id * 7) % 150);
        let _ = writeln!(keywords, "{id}\t{k1}:0.5;{k2}:0.5");
        let _ = writeln!(sns, "{id}\t{}", item_id(topic, id % 2));
        let _ = writeln!(sns, "{id}\t{}", hub_id(topic));
        let _ = writeln!(actions, "{id}\t{}\t{}\t4\t2", hub_id(topic), 15 + id % 5);
    }

    // Inactive users: few tweets and no keywords of their own; they follow
    // their topic hub and interact with it just past the action gate.
    for id in 61..=140u64 {
        let topic = id % TOPICS;
        let _ = writeln!(profile, "{id}\t{}", 10 + id % 80);
        let _ = writeln!(sns, "{id}\t{}", hub_id(topic));
        let _ = writeln!(actions, "{id}\t{}\t9\t7\t5", hub_id(topic));
    }

    // Fake users: either no tweets or tweets without interactions. Every
    // fifth one still carries keywords.
    for id in 141..=180u64 {
        let tweets = if id % 3 == 0 { 0 } else { 200 + id };
        let _ = writeln!(profile, "{id}\t{tweets}");
        if id % 5 == 0 {
            let (k1, k2) = topic_keywords(id % TOPICS);
            let _ = writeln!(keywords, "{id}\t{k1}:0.5;{k2}:0.5");
        }
    }

    // Training-period records (days 1..=74): active and inactive users
    // accept items of their own topic and reject items of the next one.
    for id in 1..=140u64 {
        let topic = id % TOPICS;
        for j in 0..8u64 {
            let day = 1 + (id * 5 + j * 9) % 72;
            let (item, result) = if j % 2 == 0 {
                (item_id(topic, j % 4), 1)
            } else {
                (item_id((topic + 1) % TOPICS, (j + 1) % 4), -1)
            };
            let _ = writeln!(log, "{id}\t{item}\t{result}\t{}", day as i64 * DAY);
        }
    }
    for id in 141..=180u64 {
        let day = 1 + id % 60;
        let _ = writeln!(log, "{id}\t{}\t1\t{}", item_id(id % TOPICS, 0), day as i64 * DAY);
    }

    // Test-period records (days 81..=99) for every odd-id user: one
    // accepted on-topic item (slot 2 or 3, never followed) and two
    // rejected off-topic items logged the same day. Even-id fake users get
    // a single accepted record. The counts (1164 train, 290 test) put the
    // default 0.8 quantile exactly on the period boundary.
    for id in (1..=180u64).filter(|id| id % 2 == 1) {
        let topic = id % TOPICS;
        let day = (81 + id % 19) as i64 * DAY;
        let on = item_id(topic, 2 + id % 2);
        let off1 = item_id((topic + 1) % TOPICS, 2);
        let off2 = item_id((topic + 2) % TOPICS, 3);
        let _ = writeln!(log, "{id}\t{on}\t1\t{day}");
        let _ = writeln!(log, "{id}\t{off1}\t-1\t{day}");
        let _ = writeln!(log, "{id}\t{off2}\t-1\t{day}");
    }
    for id in (142..=180u64).filter(|id| id % 2 == 0) {
        let day = (81 + id % 19) as i64 * DAY;
        let _ = writeln!(log, "{id}\t{}\t1\t{day}", item_id(id % TOPICS, 0));
    }

    FixtureFiles {
        files: vec![
            (USER_PROFILE_FILE, profile),
            (USER_KEY_WORD_FILE, keywords),
            (ITEM_FILE, items),
            (USER_SNS_FILE, sns),
            (USER_ACTION_FILE, actions),
            (REC_LOG_FILE, log),
        ],
    }
}

/// Pipeline configuration matched to the `smallnet` corpus: the support
/// threshold is lowered because each topic pair is carried by roughly an
/// eighth of the keyword-bearing users at weight one half.
pub fn smallnet_config() -> PipelineConfig {
    PipelineConfig {
        supp_local: 0.1,
        supp_global: 0.1,
        seed: 42,
        ..PipelineConfig::default()
    }
}

/// A corpus where every user is fake: no keywords, no interactions. Users
/// 1..=30 follow nothing; bots 40..=49 exist only to give the six items
/// (900..=905) strictly decreasing follower counts.
pub fn allfake() -> FixtureFiles {
    let mut profile = String::new();
    let mut items = String::new();
    let mut sns = String::new();
    let mut log = String::new();

    for id in 1..=30u64 {
        let _ = writeln!(profile, "{id}\t{id}");
    }
    for bot in 40..=49u64 {
        let _ = writeln!(profile, "{bot}\t0");
    }
    for (slot, followers) in [10u64, 8, 6, 4, 2, 0].into_iter().enumerate() {
        let id = 900 + slot as u64;
        let _ = writeln!(profile, "{id}\t50");
        let category = if slot < 3 { "media.news" } else { "media.fun" };
        let _ = writeln!(items, "{id}\t{category}\t");
        for bot in 40..40 + followers {
            let _ = writeln!(sns, "{bot}\t{id}");
        }
    }
    // A short log so the evaluation split is not empty.
    for id in 1..=10u64 {
        let day = id as i64 * DAY;
        let _ = writeln!(log, "{id}\t900\t1\t{day}");
        let _ = writeln!(log, "{id}\t905\t-1\t{day}");
    }

    FixtureFiles {
        files: vec![
            (USER_PROFILE_FILE, profile),
            (USER_KEY_WORD_FILE, String::new()),
            (ITEM_FILE, items),
            (USER_SNS_FILE, sns),
            (USER_ACTION_FILE, String::new()),
            (REC_LOG_FILE, log),
        ],
    }
}

pub fn allfake_config() -> PipelineConfig {
    PipelineConfig {
        seed: 7,
        ..PipelineConfig::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{load_dataset, DatasetPaths, LoadMode, UserId};
    use crate::taxonomy::{classify_all, UserClass};
    use tempfile::TempDir;

    #[test]
    fn smallnet_loads_cleanly_with_expected_shape() {
        let dir = TempDir::new().unwrap();
        smallnet().write_to(dir.path()).unwrap();
        let (ds, report) =
            load_dataset(&DatasetPaths::in_dir(dir.path()), LoadMode::Strict).unwrap();
        assert_eq!(report.total_skipped(), 0);
        assert!(report.warnings.is_empty());
        assert_eq!(ds.user_count(), 200);
        assert_eq!(ds.item_count(), 16);
        assert_eq!(ds.categories().count(), 4);

        let taxonomy = classify_all(&ds, &crate::taxonomy::TaxonomyConfig::default());
        assert_eq!(taxonomy.class(UserId(1)), Some(UserClass::Active));
        assert_eq!(taxonomy.class(UserId(61)), Some(UserClass::Inactive));
        assert_eq!(taxonomy.class(UserId(141)), Some(UserClass::Fake));
        assert_eq!(taxonomy.class(UserId(201)), Some(UserClass::Active));
        // There are users of all three classes.
        for class in UserClass::ALL {
            assert!(taxonomy.count(class) > 0, "no {class} users");
        }
    }

    #[test]
    fn smallnet_generation_is_deterministic() {
        assert_eq!(smallnet(), smallnet());
        assert_eq!(allfake(), allfake());
    }

    #[test]
    fn smallnet_mining_finds_the_four_topic_pairs() {
        let dir = TempDir::new().unwrap();
        smallnet().write_to(dir.path()).unwrap();
        let (ds, _) = load_dataset(&DatasetPaths::in_dir(dir.path()), LoadMode::Strict).unwrap();
        let classes =
            crate::mining::mine_keyword_classes(&ds, &smallnet_config().mining());
        let sets: Vec<Vec<u64>> = classes
            .classes()
            .iter()
            .map(|c| c.keywords.iter().map(|k| k.0).collect())
            .collect();
        assert_eq!(
            sets,
            vec![
                vec![101, 102],
                vec![103, 104],
                vec![105, 106],
                vec![107, 108]
            ]
        );
    }
}
