//! Corpus loading: the five tab-separated input files parsed into an
//! immutable, cross-linked [`Dataset`].
//!
//! File layout (KDD Cup 2012 Track 1 style, UTF-8, tab-separated):
//!
//! * `user_profile.tsv`  — `user-id \t tweet-count`
//! * `user_key_word.tsv` — `user-id \t k:w;k:w;...`
//! * `item.tsv`          — `item-id \t dot.separated.category \t k;k;...` (weights optional)
//! * `user_sns.tsv`      — `follower-id \t followee-id`
//! * `user_action.tsv`   — `source-id \t target-id \t at \t retweet \t comment`
//! * `rec_log.tsv`       — `user-id \t item-id \t result(1|-1) \t unix-timestamp`
//!
//! Keyword weights are normalized to sum 1 on load; item keyword entries
//! without an explicit weight default to raw weight 1, which yields the
//! uniform 1/n fallback. Item follower counts are derived from the follow
//! graph. Once built, a `Dataset` is immutable and safe to share across
//! threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Identifiers
// ---------------------------------------------------------------------------

/// Opaque user identifier. Items are users, so item ids share this type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(pub u64);

/// Opaque keyword identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KeywordId(pub u64);

/// Index of a distinct full category path within a loaded corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoryId(pub usize);

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for KeywordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// A keyword-id -> weight map whose weights sum to 1 (or the empty map).
///
/// Lookup of an absent keyword yields 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightedKeywordSet {
    entries: BTreeMap<KeywordId, f64>,
}

impl WeightedKeywordSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Weight of `keyword`, 0 when absent.
    pub fn weight(&self, keyword: KeywordId) -> f64 {
        self.entries.get(&keyword).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, keyword: KeywordId) -> bool {
        self.entries.contains_key(&keyword)
    }

    pub fn iter(&self) -> impl Iterator<Item = (KeywordId, f64)> + '_ {
        self.entries.iter().map(|(&k, &w)| (k, w))
    }

    pub fn keywords(&self) -> impl Iterator<Item = KeywordId> + '_ {
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
}

/// Sum tolerance under which a weight map counts as already normalized.
const NORMALIZED_EPS: f64 = 1e-9;

/// Divide every weight by the total so the set sums to 1.
///
/// Empty or all-zero input yields the empty set; zero-weight entries are
/// dropped. Input whose weights already sum to 1 within 1e-9 is kept
/// bit-identical, so saving and reloading a corpus round-trips exactly.
pub fn normalize_keyword_weights(
    raw: &BTreeMap<KeywordId, f64>,
) -> Result<WeightedKeywordSet> {
    let mut entries = BTreeMap::new();
    let mut total = 0.0;
    for (&k, &w) in raw {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidInput(format!(
                "keyword {k} has negative or non-finite weight {w}"
            )));
        }
        total += w;
    }
    if total == 0.0 {
        return Ok(WeightedKeywordSet::empty());
    }
    let already_normalized = (total - 1.0).abs() <= NORMALIZED_EPS;
    for (&k, &w) in raw {
        if w > 0.0 {
            let w = if already_normalized { w } else { w / total };
            entries.insert(k, w);
        }
    }
    Ok(WeightedKeywordSet { entries })
}

/// A dot-separated category hierarchy path, e.g. `a.b.d.f`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoryPath {
    segments: Vec<String>,
}

impl CategoryPath {
    pub fn segments(&self) -> &[String] {
        &self.segments
    }

    pub fn depth(&self) -> usize {
        self.segments.len()
    }
}

/// Split `text` on `'.'`; every segment must be non-empty.
pub fn parse_category_path(text: &str) -> Result<CategoryPath> {
    if text.is_empty() {
        return Err(Error::InvalidInput("empty category path".into()));
    }
    let segments: Vec<String> = text.split('.').map(str::to_owned).collect();
    if segments.iter().any(String::is_empty) {
        return Err(Error::InvalidInput(format!(
            "category path {text:?} has an empty segment"
        )));
    }
    Ok(CategoryPath { segments })
}

impl FromStr for CategoryPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_category_path(s)
    }
}

impl fmt::Display for CategoryPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.segments.join("."))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserRecord {
    pub id: UserId,
    pub tweet_count: u64,
    pub keywords: WeightedKeywordSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemRecord {
    pub id: UserId,
    pub category: CategoryId,
    pub keywords: WeightedKeywordSet,
    /// Number of followers, derived from the follow graph.
    pub follower_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteractionCounts {
    pub source: UserId,
    pub target: UserId,
    pub at: u64,
    pub retweet: u64,
    pub comment: u64,
}

impl InteractionCounts {
    pub fn total(&self) -> u64 {
        self.at + self.retweet + self.comment
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FollowEdge {
    pub follower: UserId,
    pub followee: UserId,
}

/// Outcome of a logged recommendation: accepted (+1) or rejected (-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Accepted,
    Rejected,
}

impl Outcome {
    /// +1.0 for accepted, -1.0 for rejected.
    pub fn value(self) -> f64 {
        match self {
            Outcome::Accepted => 1.0,
            Outcome::Rejected => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecLogRecord {
    pub user: UserId,
    pub item: UserId,
    pub outcome: Outcome,
    pub timestamp: i64,
}

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

/// The immutable loaded corpus.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    users: BTreeMap<UserId, UserRecord>,
    items: BTreeMap<UserId, ItemRecord>,
    categories: Vec<CategoryPath>,
    items_by_category: BTreeMap<CategoryId, Vec<UserId>>,
    followees: BTreeMap<UserId, BTreeSet<UserId>>,
    interactions: BTreeMap<(UserId, UserId), InteractionCounts>,
    rec_log: Vec<RecLogRecord>,
}

impl Dataset {
    pub fn user(&self, id: UserId) -> Option<&UserRecord> {
        self.users.get(&id)
    }

    pub fn users(&self) -> impl Iterator<Item = &UserRecord> {
        self.users.values()
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    /// Users with a non-empty keyword set, in id order.
    pub fn keyword_users(&self) -> impl Iterator<Item = &UserRecord> {
        self.users.values().filter(|u| !u.keywords.is_empty())
    }

    pub fn item(&self, id: UserId) -> Option<&ItemRecord> {
        self.items.get(&id)
    }

    pub fn items(&self) -> impl Iterator<Item = &ItemRecord> {
        self.items.values()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn category(&self, id: CategoryId) -> &CategoryPath {
        &self.categories[id.0]
    }

    pub fn categories(&self) -> impl Iterator<Item = (CategoryId, &CategoryPath)> {
        self.categories
            .iter()
            .enumerate()
            .map(|(i, p)| (CategoryId(i), p))
    }

    pub fn category_id(&self, path: &CategoryPath) -> Option<CategoryId> {
        self.categories
            .binary_search(path)
            .ok()
            .map(CategoryId)
    }

    /// Item ids carrying the given full category path, in id order.
    pub fn items_in_category(&self, id: CategoryId) -> &[UserId] {
        self.items_by_category
            .get(&id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn followees(&self, user: UserId) -> impl Iterator<Item = UserId> + '_ {
        self.followees
            .get(&user)
            .into_iter()
            .flat_map(|s| s.iter().copied())
    }

    pub fn follows(&self, follower: UserId, followee: UserId) -> bool {
        self.followees
            .get(&follower)
            .is_some_and(|s| s.contains(&followee))
    }

    pub fn follow_edges(&self) -> impl Iterator<Item = FollowEdge> + '_ {
        self.followees.iter().flat_map(|(&follower, set)| {
            set.iter()
                .map(move |&followee| FollowEdge { follower, followee })
        })
    }

    /// The interaction row from `source` to `target`, if any.
    pub fn interaction(&self, source: UserId, target: UserId) -> Option<&InteractionCounts> {
        self.interactions.get(&(source, target))
    }

    pub fn interactions(&self) -> impl Iterator<Item = &InteractionCounts> {
        self.interactions.values()
    }

    /// Sum of at+retweet+comment over the user's outgoing interaction rows.
    pub fn outgoing_interaction_total(&self, user: UserId) -> u64 {
        self.interactions
            .range((user, UserId(u64::MIN))..=(user, UserId(u64::MAX)))
            .map(|(_, c)| c.total())
            .sum()
    }

    /// Recommendation log, sorted by (timestamp, user, item).
    pub fn rec_log(&self) -> &[RecLogRecord] {
        &self.rec_log
    }
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

/// How to treat malformed or inconsistent input lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadMode {
    /// Any malformed line aborts the load with file and line number.
    Strict,
    /// Malformed lines are skipped and counted in the [`LoadReport`].
    Lenient,
}

/// Locations of the input files.
#[derive(Debug, Clone)]
pub struct DatasetPaths {
    pub user_profile: PathBuf,
    pub user_key_word: PathBuf,
    pub item: PathBuf,
    pub user_sns: PathBuf,
    pub user_action: PathBuf,
    pub rec_log: PathBuf,
}

pub const USER_PROFILE_FILE: &str = "user_profile.tsv";
pub const USER_KEY_WORD_FILE: &str = "user_key_word.tsv";
pub const ITEM_FILE: &str = "item.tsv";
pub const USER_SNS_FILE: &str = "user_sns.tsv";
pub const USER_ACTION_FILE: &str = "user_action.tsv";
pub const REC_LOG_FILE: &str = "rec_log.tsv";

impl DatasetPaths {
    /// Canonical file names inside one directory.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        DatasetPaths {
            user_profile: dir.join(USER_PROFILE_FILE),
            user_key_word: dir.join(USER_KEY_WORD_FILE),
            item: dir.join(ITEM_FILE),
            user_sns: dir.join(USER_SNS_FILE),
            user_action: dir.join(USER_ACTION_FILE),
            rec_log: dir.join(REC_LOG_FILE),
        }
    }
}

/// What a lenient load skipped or patched up.
#[derive(Debug, Clone, Default)]
pub struct LoadReport {
    /// Skipped line counts per file name.
    pub skipped: BTreeMap<String, u64>,
    /// Human-readable notes (duplicate rows summed, profiles synthesized, ...).
    pub warnings: Vec<String>,
}

impl LoadReport {
    pub fn total_skipped(&self) -> u64 {
        self.skipped.values().sum()
    }

    fn skip(&mut self, file: &str) {
        *self.skipped.entry(file.to_owned()).or_insert(0) += 1;
    }
}

struct Loader {
    mode: LoadMode,
    report: LoadReport,
}

impl Loader {
    /// In strict mode propagate the line error, in lenient mode count a skip.
    fn line_error(&mut self, file: &str, line: u64, msg: String) -> Result<()> {
        match self.mode {
            LoadMode::Strict => Err(Error::parse(file, line, msg)),
            LoadMode::Lenient => {
                self.report.skip(file);
                Ok(())
            }
        }
    }
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(text.lines().map(|l| l.trim_end_matches('\r').to_owned()).collect())
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn parse_id(field: &str) -> std::result::Result<u64, String> {
    field
        .parse::<u64>()
        .map_err(|_| format!("invalid id {field:?}"))
}

fn parse_count(field: &str) -> std::result::Result<u64, String> {
    field
        .parse::<u64>()
        .map_err(|_| format!("invalid count {field:?}"))
}

/// Parse `k:w;k:w;...` (or bare `k;k;...`) into a raw weight map.
/// A bare entry defaults to raw weight 1, so unweighted item keyword lists
/// come out uniform after normalization.
fn parse_keyword_entries(field: &str) -> std::result::Result<BTreeMap<KeywordId, f64>, String> {
    let mut raw = BTreeMap::new();
    if field.is_empty() {
        return Ok(raw);
    }
    for entry in field.split(';') {
        if entry.is_empty() {
            return Err("empty keyword entry".into());
        }
        let (k, w) = match entry.split_once(':') {
            Some((k, w)) => {
                let w: f64 = w
                    .parse()
                    .map_err(|_| format!("invalid keyword weight {w:?}"))?;
                if !w.is_finite() || w < 0.0 {
                    return Err(format!("negative or non-finite keyword weight {w}"));
                }
                (k, w)
            }
            None => (entry, 1.0),
        };
        let k = KeywordId(parse_id(k).map_err(|_| format!("invalid keyword id {k:?}"))?);
        if raw.insert(k, w).is_some() {
            return Err(format!("duplicate keyword id {k}"));
        }
    }
    Ok(raw)
}

fn split_fields(line: &str, expected: usize) -> std::result::Result<Vec<&str>, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != expected {
        return Err(format!(
            "expected {expected} tab-separated fields, found {}",
            fields.len()
        ));
    }
    Ok(fields)
}

/// Parse and cross-link the input files into an immutable corpus.
///
/// Files are read in a fixed order (profiles, keywords, items, follows,
/// actions, log) so cross-references can be validated as they appear. The
/// result is independent of that order: all containers are keyed by id.
pub fn load_dataset(paths: &DatasetPaths, mode: LoadMode) -> Result<(Dataset, LoadReport)> {
    let mut loader = Loader {
        mode,
        report: LoadReport::default(),
    };

    // user_profile.tsv
    let mut users: BTreeMap<UserId, UserRecord> = BTreeMap::new();
    let file = file_name(&paths.user_profile);
    for (no, line) in read_lines(&paths.user_profile)?.iter().enumerate() {
        let no = no as u64 + 1;
        if line.is_empty() {
            continue;
        }
        let parsed = split_fields(line, 2).and_then(|f| {
            let id = UserId(parse_id(f[0])?);
            let tweets = parse_count(f[1])?;
            Ok((id, tweets))
        });
        match parsed {
            Ok((id, tweet_count)) => {
                if users.contains_key(&id) {
                    loader.line_error(&file, no, format!("duplicate user id {id}"))?;
                    continue;
                }
                users.insert(
                    id,
                    UserRecord {
                        id,
                        tweet_count,
                        keywords: WeightedKeywordSet::empty(),
                    },
                );
            }
            Err(msg) => loader.line_error(&file, no, msg)?,
        }
    }

    // user_key_word.tsv
    let file = file_name(&paths.user_key_word);
    let mut seen_keywords: BTreeSet<UserId> = BTreeSet::new();
    for (no, line) in read_lines(&paths.user_key_word)?.iter().enumerate() {
        let no = no as u64 + 1;
        if line.is_empty() {
            continue;
        }
        let parsed = split_fields(line, 2).and_then(|f| {
            let id = UserId(parse_id(f[0])?);
            let raw = parse_keyword_entries(f[1])?;
            Ok((id, raw))
        });
        match parsed {
            Ok((id, raw)) => {
                if !users.contains_key(&id) {
                    loader.line_error(&file, no, format!("keywords for unknown user {id}"))?;
                    continue;
                }
                if !seen_keywords.insert(id) {
                    loader.line_error(&file, no, format!("duplicate keyword row for user {id}"))?;
                    continue;
                }
                let keywords = normalize_keyword_weights(&raw)
                    .map_err(|e| Error::parse(&file, no, e.to_string()))?;
                users.get_mut(&id).expect("checked above").keywords = keywords;
            }
            Err(msg) => loader.line_error(&file, no, msg)?,
        }
    }

    // item.tsv
    let file = file_name(&paths.item);
    let mut raw_items: BTreeMap<UserId, (CategoryPath, WeightedKeywordSet)> = BTreeMap::new();
    for (no, line) in read_lines(&paths.item)?.iter().enumerate() {
        let no = no as u64 + 1;
        if line.is_empty() {
            continue;
        }
        let parsed = split_fields(line, 3).and_then(|f| {
            let id = UserId(parse_id(f[0])?);
            let path = parse_category_path(f[1]).map_err(|e| e.to_string())?;
            let raw = parse_keyword_entries(f[2])?;
            Ok((id, path, raw))
        });
        match parsed {
            Ok((id, path, raw)) => {
                if raw_items.contains_key(&id) {
                    loader.line_error(&file, no, format!("duplicate item id {id}"))?;
                    continue;
                }
                if let std::collections::btree_map::Entry::Vacant(vacant) = users.entry(id) {
                    // Items are users. A missing profile is an error in strict
                    // mode; lenient mode synthesizes an inactive profile.
                    match mode {
                        LoadMode::Strict => {
                            return Err(Error::parse(
                                &file,
                                no,
                                format!("item {id} has no user profile"),
                            ));
                        }
                        LoadMode::Lenient => {
                            loader
                                .report
                                .warnings
                                .push(format!("{file}:{no}: synthesized profile for item {id}"));
                            vacant.insert(UserRecord {
                                id,
                                tweet_count: 0,
                                keywords: WeightedKeywordSet::empty(),
                            });
                        }
                    }
                }
                let keywords = normalize_keyword_weights(&raw)
                    .map_err(|e| Error::parse(&file, no, e.to_string()))?;
                raw_items.insert(id, (path, keywords));
            }
            Err(msg) => loader.line_error(&file, no, msg)?,
        }
    }

    // user_sns.tsv
    let file = file_name(&paths.user_sns);
    let mut followees: BTreeMap<UserId, BTreeSet<UserId>> = BTreeMap::new();
    for (no, line) in read_lines(&paths.user_sns)?.iter().enumerate() {
        let no = no as u64 + 1;
        if line.is_empty() {
            continue;
        }
        let parsed = split_fields(line, 2).and_then(|f| {
            let follower = UserId(parse_id(f[0])?);
            let followee = UserId(parse_id(f[1])?);
            Ok((follower, followee))
        });
        match parsed {
            Ok((follower, followee)) => {
                if follower == followee {
                    loader.line_error(&file, no, format!("self-loop edge {follower}"))?;
                    continue;
                }
                if !users.contains_key(&follower) || !users.contains_key(&followee) {
                    loader.line_error(
                        &file,
                        no,
                        format!("edge {follower} -> {followee} references unknown user"),
                    )?;
                    continue;
                }
                if !followees.entry(follower).or_default().insert(followee) {
                    loader.line_error(
                        &file,
                        no,
                        format!("duplicate edge {follower} -> {followee}"),
                    )?;
                }
            }
            Err(msg) => loader.line_error(&file, no, msg)?,
        }
    }

    // user_action.tsv
    let file = file_name(&paths.user_action);
    let mut interactions: BTreeMap<(UserId, UserId), InteractionCounts> = BTreeMap::new();
    for (no, line) in read_lines(&paths.user_action)?.iter().enumerate() {
        let no = no as u64 + 1;
        if line.is_empty() {
            continue;
        }
        let parsed = split_fields(line, 5).and_then(|f| {
            let source = UserId(parse_id(f[0])?);
            let target = UserId(parse_id(f[1])?);
            let at = parse_count(f[2])?;
            let retweet = parse_count(f[3])?;
            let comment = parse_count(f[4])?;
            Ok(InteractionCounts {
                source,
                target,
                at,
                retweet,
                comment,
            })
        });
        match parsed {
            Ok(row) => {
                if !users.contains_key(&row.source) || !users.contains_key(&row.target) {
                    loader.line_error(
                        &file,
                        no,
                        format!(
                            "interaction {} -> {} references unknown user",
                            row.source, row.target
                        ),
                    )?;
                    continue;
                }
                match interactions.entry((row.source, row.target)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(row);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        // Duplicate (source,target) rows are summed so that
                        // concatenated logs still load.
                        let merged = e.get_mut();
                        merged.at += row.at;
                        merged.retweet += row.retweet;
                        merged.comment += row.comment;
                        loader.report.warnings.push(format!(
                            "{file}:{no}: duplicate interaction pair {} -> {} summed",
                            row.source, row.target
                        ));
                    }
                }
            }
            Err(msg) => loader.line_error(&file, no, msg)?,
        }
    }

    // rec_log.tsv
    let file = file_name(&paths.rec_log);
    let mut rec_log: Vec<RecLogRecord> = Vec::new();
    for (no, line) in read_lines(&paths.rec_log)?.iter().enumerate() {
        let no = no as u64 + 1;
        if line.is_empty() {
            continue;
        }
        let parsed = split_fields(line, 4).and_then(|f| {
            let user = UserId(parse_id(f[0])?);
            let item = UserId(parse_id(f[1])?);
            let outcome = match f[2] {
                "1" | "+1" => Outcome::Accepted,
                "-1" => Outcome::Rejected,
                other => return Err(format!("invalid result {other:?}, expected 1 or -1")),
            };
            let timestamp: i64 = f[3]
                .parse()
                .map_err(|_| format!("invalid timestamp {:?}", f[3]))?;
            Ok(RecLogRecord {
                user,
                item,
                outcome,
                timestamp,
            })
        });
        match parsed {
            Ok(rec) => {
                if !users.contains_key(&rec.user) {
                    loader.line_error(&file, no, format!("record for unknown user {}", rec.user))?;
                    continue;
                }
                if !raw_items.contains_key(&rec.item) {
                    loader.line_error(&file, no, format!("record for unknown item {}", rec.item))?;
                    continue;
                }
                rec_log.push(rec);
            }
            Err(msg) => loader.line_error(&file, no, msg)?,
        }
    }
    rec_log.sort_by_key(|r| (r.timestamp, r.user, r.item, r.outcome == Outcome::Rejected));

    // Cross-link: category interner, per-category item index, follower counts.
    let mut categories: Vec<CategoryPath> =
        raw_items.values().map(|(p, _)| p.clone()).collect();
    categories.sort();
    categories.dedup();

    let mut follower_counts: BTreeMap<UserId, u64> = BTreeMap::new();
    for set in followees.values() {
        for &followee in set {
            *follower_counts.entry(followee).or_insert(0) += 1;
        }
    }

    let mut items: BTreeMap<UserId, ItemRecord> = BTreeMap::new();
    let mut items_by_category: BTreeMap<CategoryId, Vec<UserId>> = BTreeMap::new();
    for (id, (path, keywords)) in raw_items {
        let category = CategoryId(
            categories
                .binary_search(&path)
                .expect("category interned above"),
        );
        items.insert(
            id,
            ItemRecord {
                id,
                category,
                keywords,
                follower_count: follower_counts.get(&id).copied().unwrap_or(0),
            },
        );
        items_by_category.entry(category).or_default().push(id);
    }

    let dataset = Dataset {
        users,
        items,
        categories,
        items_by_category,
        followees,
        interactions,
        rec_log,
    };
    Ok((dataset, loader.report))
}

// ---------------------------------------------------------------------------
// Saving
// ---------------------------------------------------------------------------

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f =
        fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

fn format_keywords(set: &WeightedKeywordSet) -> String {
    set.iter()
        .map(|(k, w)| format!("{k}:{w}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Serialize the corpus back to the six TSV files under `dir`.
///
/// Rows come out in canonical id order and weights use the shortest exact
/// decimal form, so a saved corpus reloads equal to the original.
pub fn save_dataset(dataset: &Dataset, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let paths = DatasetPaths::in_dir(dir);

    let mut out = String::new();
    for u in dataset.users() {
        out.push_str(&format!("{}\t{}\n", u.id, u.tweet_count));
    }
    write_file(&paths.user_profile, &out)?;

    let mut out = String::new();
    for u in dataset.users() {
        if !u.keywords.is_empty() {
            out.push_str(&format!("{}\t{}\n", u.id, format_keywords(&u.keywords)));
        }
    }
    write_file(&paths.user_key_word, &out)?;

    let mut out = String::new();
    for item in dataset.items() {
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            item.id,
            dataset.category(item.category),
            format_keywords(&item.keywords)
        ));
    }
    write_file(&paths.item, &out)?;

    let mut out = String::new();
    for edge in dataset.follow_edges() {
        out.push_str(&format!("{}\t{}\n", edge.follower, edge.followee));
    }
    write_file(&paths.user_sns, &out)?;

    let mut out = String::new();
    for c in dataset.interactions() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            c.source, c.target, c.at, c.retweet, c.comment
        ));
    }
    write_file(&paths.user_action, &out)?;

    let mut out = String::new();
    for r in dataset.rec_log() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.user,
            r.item,
            match r.outcome {
                Outcome::Accepted => "1",
                Outcome::Rejected => "-1",
            },
            r.timestamp
        ));
    }
    write_file(&paths.rec_log, &out)?;

    Ok(())
}
