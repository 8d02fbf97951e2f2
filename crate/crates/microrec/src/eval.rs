//! Ranking evaluation: AP@k per user and MAP@k per user class and overall.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::dataset::UserId;
use crate::taxonomy::UserClass;

/// Average precision over a k-slot ranked list: the sum over hit positions
/// of precision-at-position times the recall increment. The recall
/// denominator is `min(|accepted|, k)`; an empty accepted set scores 0.
pub fn ap_at_k(recommended: &[UserId], accepted: &BTreeSet<UserId>, k: usize) -> f64 {
    let denominator = accepted.len().min(k);
    if denominator == 0 {
        return 0.0;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (idx, item) in recommended.iter().take(k).enumerate() {
        if accepted.contains(item) {
            hits += 1;
            sum += hits as f64 / (idx + 1) as f64;
        }
    }
    sum / denominator as f64
}

/// Per-user APs rolled up into per-class and overall means.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalReport {
    /// (user, class, AP@k) for every evaluated user, in user-id order.
    pub per_user: Vec<(UserId, UserClass, f64)>,
    /// MAP@k and user count per class; classes with no users are absent.
    pub per_class: BTreeMap<UserClass, (f64, usize)>,
    /// Overall MAP@k and user count; `None` when nothing was evaluated.
    pub overall: Option<(f64, usize)>,
}

impl EvalReport {
    pub fn map(&self, class: UserClass) -> Option<f64> {
        self.per_class.get(&class).map(|&(map, _)| map)
    }

    pub fn overall_map(&self) -> Option<f64> {
        self.overall.map(|(map, _)| map)
    }

    /// Human-readable summary block.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "evaluated users: {}", self.per_user.len());
        for (&class, &(map, count)) in &self.per_class {
            let _ = writeln!(out, "  {class:<8} MAP@k = {map:.5}  ({count} users)");
        }
        match self.overall {
            Some((map, count)) => {
                let _ = writeln!(out, "  {:<8} MAP@k = {map:.5}  ({count} users)", "total");
            }
            None => {
                let _ = writeln!(out, "  no users evaluated");
            }
        }
        out
    }
}

/// Aggregate per-user APs into the report.
pub fn map_at_k(mut per_user: Vec<(UserId, UserClass, f64)>) -> EvalReport {
    per_user.sort_by_key(|&(user, _, _)| user);
    let mut sums: BTreeMap<UserClass, (f64, usize)> = BTreeMap::new();
    let mut total = 0.0;
    for &(_, class, ap) in &per_user {
        let entry = sums.entry(class).or_insert((0.0, 0));
        entry.0 += ap;
        entry.1 += 1;
        total += ap;
    }
    let per_class = sums
        .into_iter()
        .map(|(class, (sum, n))| (class, (sum / n as f64, n)))
        .collect();
    let overall = if per_user.is_empty() {
        None
    } else {
        Some((total / per_user.len() as f64, per_user.len()))
    };
    EvalReport {
        per_user,
        per_class,
        overall,
    }
}
