//! Synonym keyword-class discovery by distributed weighted association-rule
//! mining, simulated over deterministic logical sites.
//!
//! The user-keyword database is split across `n_sites` remote sites by
//! `user-id mod n_sites`. Each iteration the sites generate candidate
//! itemsets, prune them by local support, and route survivors to polling
//! sites by a stable hash; polling sites prune by global support and global
//! confidence, and the surviving itemsets are unioned and broadcast to every
//! site for the next round. The final keyword classes are the maximal
//! frequent itemsets.
//!
//! Support of an itemset is the average, over the whole user population, of
//! each user's minimum weight across the itemset (0 for absent keywords).
//! Confidence of an itemset is its support divided by the largest support
//! among its one-smaller subsets; singletons have confidence 1. Confidence
//! is enforced only globally so the mined result does not depend on how the
//! users were partitioned.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::dataset::{Dataset, KeywordId, UserId};

/// Index of a keyword class within a [`KeywordClassSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub usize);

/// Thresholds and topology of the mining run.
#[derive(Debug, Clone)]
pub struct MiningConfig {
    pub supp_local: f64,
    pub supp_global: f64,
    /// Carried for interface parity with the global threshold; pruning by
    /// confidence happens only at the polling sites (see module docs).
    pub conf_local: f64,
    pub conf_global: f64,
    pub n_sites: usize,
    pub n_polling_sites: usize,
    pub max_itemset_size: usize,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            supp_local: 0.2,
            supp_global: 0.2,
            conf_local: 0.7,
            conf_global: 0.7,
            n_sites: 4,
            n_polling_sites: 4,
            max_itemset_size: 5,
        }
    }
}

/// One logical remote site and the users whose keyword rows live there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SitePartition {
    pub site: usize,
    pub users: Vec<UserId>,
}

/// A candidate itemset with the supports gathered during one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateItemset {
    /// Sorted keyword ids.
    pub keywords: Vec<KeywordId>,
    /// Local support per site, filled once the sites have been consulted.
    pub local_support: Vec<f64>,
    pub global_support: f64,
    pub global_confidence: f64,
}

impl CandidateItemset {
    fn new(keywords: Vec<KeywordId>) -> Self {
        CandidateItemset {
            keywords,
            local_support: Vec::new(),
            global_support: 0.0,
            global_confidence: 0.0,
        }
    }
}

/// A mined synonym class with its global support.
#[derive(Debug, Clone, PartialEq)]
pub struct KeywordClass {
    pub keywords: BTreeSet<KeywordId>,
    pub support: f64,
}

impl KeywordClass {
    pub fn contains(&self, keyword: KeywordId) -> bool {
        self.keywords.contains(&keyword)
    }
}

/// The mined keyword classes, ordered by size descending then
/// lexicographically. A keyword may belong to several classes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeywordClassSet {
    classes: Vec<KeywordClass>,
}

impl KeywordClassSet {
    pub fn from_classes(mut classes: Vec<KeywordClass>) -> Self {
        classes.sort_by(|a, b| {
            b.keywords
                .len()
                .cmp(&a.keywords.len())
                .then_with(|| a.keywords.cmp(&b.keywords))
        });
        KeywordClassSet { classes }
    }

    pub fn classes(&self) -> &[KeywordClass] {
        &self.classes
    }

    pub fn get(&self, id: ClassId) -> &KeywordClass {
        &self.classes[id.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClassId, &KeywordClass)> {
        self.classes
            .iter()
            .enumerate()
            .map(|(i, c)| (ClassId(i), c))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Deterministic user partition: user-id mod `n_sites`, keyword-bearing
/// users only. Empty partitions are allowed.
pub fn partition_users(dataset: &Dataset, n_sites: usize) -> Vec<SitePartition> {
    assert!(n_sites >= 1, "n_sites must be at least 1");
    let mut partitions: Vec<SitePartition> = (0..n_sites)
        .map(|site| SitePartition {
            site,
            users: Vec::new(),
        })
        .collect();
    for user in dataset.keyword_users() {
        let site = (user.id.0 % n_sites as u64) as usize;
        partitions[site].users.push(user.id);
    }
    partitions
}

/// Average over `users` of the minimum keyword weight across `itemset`
/// (0 for users missing any itemset keyword). Empty population yields 0.
pub fn support(itemset: &[KeywordId], users: &[UserId], dataset: &Dataset) -> f64 {
    debug_assert!(!itemset.is_empty(), "support of the empty itemset");
    if users.is_empty() {
        return 0.0;
    }
    let sum: f64 = users
        .iter()
        .map(|&u| {
            let keywords = match dataset.user(u) {
                Some(rec) => &rec.keywords,
                None => return 0.0,
            };
            itemset
                .iter()
                .map(|&k| keywords.weight(k))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    sum / users.len() as f64
}

/// Support of `itemset` divided by the largest support among its
/// one-smaller subsets. Singletons have confidence 1; a zero denominator
/// yields confidence 0.
pub fn confidence(itemset: &[KeywordId], users: &[UserId], dataset: &Dataset) -> f64 {
    debug_assert!(!itemset.is_empty(), "confidence of the empty itemset");
    if itemset.len() == 1 {
        return 1.0;
    }
    let numerator = support(itemset, users, dataset);
    let mut denominator = 0.0f64;
    for omit in 0..itemset.len() {
        let mut subset = itemset.to_vec();
        subset.remove(omit);
        denominator = denominator.max(support(&subset, users, dataset));
    }
    if denominator == 0.0 {
        0.0
    } else {
        numerator / denominator
    }
}

/// Apriori candidate generation: join pairs of (j-1)-itemsets sharing their
/// first j-2 elements, then prune candidates with an infrequent subset.
/// Input itemsets must be sorted and of equal size; output is sorted
/// lexicographically.
pub fn apriori_gen(frequent_prev: &[Vec<KeywordId>]) -> Vec<CandidateItemset> {
    if frequent_prev.is_empty() {
        return Vec::new();
    }
    let size = frequent_prev[0].len();
    debug_assert!(frequent_prev.iter().all(|s| s.len() == size));
    let prev: BTreeSet<&[KeywordId]> = frequent_prev.iter().map(Vec::as_slice).collect();

    let mut sorted: Vec<&Vec<KeywordId>> = frequent_prev.iter().collect();
    sorted.sort();
    sorted.dedup();

    let mut out: BTreeSet<Vec<KeywordId>> = BTreeSet::new();
    for i in 0..sorted.len() {
        for j in (i + 1)..sorted.len() {
            let (a, b) = (sorted[i], sorted[j]);
            if a[..size - 1] != b[..size - 1] {
                continue;
            }
            let mut candidate = a.clone();
            candidate.push(b[size - 1]);
            candidate.sort();
            // Prune: every (j-1)-subset must already be frequent.
            let keep = (0..candidate.len()).all(|omit| {
                let mut subset = candidate.clone();
                subset.remove(omit);
                prev.contains(subset.as_slice())
            });
            if keep {
                out.insert(candidate);
            }
        }
    }
    out.into_iter().map(CandidateItemset::new).collect()
}

/// Stable polling-site assignment: FNV-1a 64 over the sorted keyword ids
/// (little-endian bytes), reduced mod `n_polling_sites`.
///
/// Published test vector: the itemset {1, 2} hashes to 8581494755304202342,
/// which lands on site 2 of 4.
pub fn polling_assign(itemset: &[KeywordId], n_polling_sites: usize) -> usize {
    assert!(n_polling_sites >= 1, "n_polling_sites must be at least 1");
    let mut sorted = itemset.to_vec();
    sorted.sort();
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = FNV_OFFSET;
    for k in &sorted {
        for byte in k.0.to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(FNV_PRIME);
        }
    }
    (hash % n_polling_sites as u64) as usize
}

/// Run the full distributed mining protocol and return the maximal frequent
/// itemsets as keyword classes.
pub fn mine_keyword_classes(dataset: &Dataset, config: &MiningConfig) -> KeywordClassSet {
    let partitions = partition_users(dataset, config.n_sites);
    let db: Vec<UserId> = dataset.keyword_users().map(|u| u.id).collect();

    let mut frequent_all: BTreeMap<Vec<KeywordId>, f64> = BTreeMap::new();
    let mut frequent_prev: Vec<Vec<KeywordId>> = Vec::new();

    for size in 1..=config.max_itemset_size {
        // Remote sites: candidate generation.
        let candidates: Vec<CandidateItemset> = if size == 1 {
            let mut singletons: BTreeSet<KeywordId> = BTreeSet::new();
            for p in &partitions {
                for &u in &p.users {
                    if let Some(rec) = dataset.user(u) {
                        singletons.extend(rec.keywords.keywords());
                    }
                }
            }
            singletons
                .into_iter()
                .map(|k| CandidateItemset::new(vec![k]))
                .collect()
        } else {
            // Frequent sets were broadcast to every site, so all sites
            // generate the same candidates.
            apriori_gen(&frequent_prev)
        };
        if candidates.is_empty() {
            break;
        }

        // Remote sites: local support, one column per site.
        let local: Vec<Vec<f64>> = partitions
            .par_iter()
            .map(|p| {
                candidates
                    .iter()
                    .map(|c| support(&c.keywords, &p.users, dataset))
                    .collect()
            })
            .collect();

        // Local pruning is by support only; survivors go to their polling
        // site keyed by the stable hash.
        let mut by_polling_site: BTreeMap<usize, Vec<CandidateItemset>> = BTreeMap::new();
        for (idx, mut candidate) in candidates.into_iter().enumerate() {
            candidate.local_support = local.iter().map(|col| col[idx]).collect();
            let locally_frequent = candidate
                .local_support
                .iter()
                .any(|&s| s >= config.supp_local);
            if !locally_frequent {
                continue;
            }
            let site = polling_assign(&candidate.keywords, config.n_polling_sites);
            by_polling_site.entry(site).or_default().push(candidate);
        }

        // Polling sites: global support and confidence pruning.
        let evaluated: Vec<Vec<CandidateItemset>> = by_polling_site
            .into_par_iter()
            .map(|(_, group)| {
                group
                    .into_iter()
                    .filter_map(|mut c| {
                        c.global_support = support(&c.keywords, &db, dataset);
                        if c.global_support < config.supp_global {
                            return None;
                        }
                        c.global_confidence = confidence(&c.keywords, &db, dataset);
                        if c.global_confidence < config.conf_global {
                            return None;
                        }
                        Some(c)
                    })
                    .collect()
            })
            .collect();

        // Home site: union the survivors and broadcast for the next round.
        let mut next: BTreeMap<Vec<KeywordId>, f64> = BTreeMap::new();
        for c in evaluated.into_iter().flatten() {
            next.insert(c.keywords, c.global_support);
        }
        if next.is_empty() {
            break;
        }
        frequent_prev = next.keys().cloned().collect();
        frequent_all.extend(next);
    }

    maximal_classes(&frequent_all)
}

/// Keep only itemsets that are not strict subsets of another frequent
/// itemset; singletons therefore survive only when no larger class holds
/// their keyword.
fn maximal_classes(frequent: &BTreeMap<Vec<KeywordId>, f64>) -> KeywordClassSet {
    let sets: Vec<(BTreeSet<KeywordId>, f64)> = frequent
        .iter()
        .map(|(ks, &s)| (ks.iter().copied().collect(), s))
        .collect();
    let classes = sets
        .iter()
        .filter(|(set, _)| {
            !sets
                .iter()
                .any(|(other, _)| other.len() > set.len() && set.is_subset(other))
        })
        .map(|(set, support)| KeywordClass {
            keywords: set.clone(),
            support: *support,
        })
        .collect();
    KeywordClassSet::from_classes(classes)
}
