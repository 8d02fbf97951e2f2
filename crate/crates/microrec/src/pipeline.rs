//! End-to-end orchestration: mine, classify, profile, train on the earlier
//! records, recommend, and evaluate on the later records.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::dataset::{Dataset, Outcome, RecLogRecord, UserId};
use crate::error::{Error, Result};
use crate::eval::{ap_at_k, map_at_k, EvalReport};
use crate::interest::{build_profiles, InterestIndex};
use crate::mining::{mine_keyword_classes, KeywordClassSet};
use crate::scoring::{
    build_popularity, AcceptanceHistory, ClassParams, GradingParams, Recommendation, Recommender,
};
use crate::taxonomy::{classify_all, Taxonomy, UserClass};
use crate::training::{aggregate_params, train_all, TrainedParams, TrainerDeps};

/// Split the (timestamp-sorted) log at the train-fraction quantile of the
/// timestamps: records at or before the cutoff timestamp train, the rest
/// test. Records sharing the cutoff timestamp all land in the train split.
pub fn split_by_time(
    records: &[RecLogRecord],
    train_fraction: f64,
) -> (&[RecLogRecord], &[RecLogRecord]) {
    debug_assert!(records.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
    if records.is_empty() || train_fraction <= 0.0 {
        return (&records[..0], records);
    }
    if train_fraction >= 1.0 {
        return (records, &records[records.len()..]);
    }
    let rank = ((train_fraction * records.len() as f64).ceil() as usize)
        .clamp(1, records.len());
    let cutoff = records[rank - 1].timestamp;
    let split = records.partition_point(|r| r.timestamp <= cutoff);
    records.split_at(split)
}

/// Everything a pipeline run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineArtifacts {
    pub classes: KeywordClassSet,
    pub taxonomy: Taxonomy,
    pub trained: BTreeMap<UserClass, TrainedParams>,
    pub recommendations: Vec<Recommendation>,
    pub report: EvalReport,
}

/// Rank each test user's logged items by the trained grading functions and
/// score the top-k list against the items they actually accepted.
pub fn evaluate_records(
    recommender: &Recommender<'_>,
    records: &[RecLogRecord],
) -> Result<EvalReport> {
    let mut per_user: BTreeMap<UserId, (BTreeSet<UserId>, BTreeSet<UserId>)> = BTreeMap::new();
    for r in records {
        let entry = per_user.entry(r.user).or_default();
        entry.0.insert(r.item);
        if r.outcome == Outcome::Accepted {
            entry.1.insert(r.item);
        }
    }
    let evaluated: Vec<(UserId, UserClass, f64)> = per_user
        .par_iter()
        .map(|(&user, (items, accepted))| {
            let candidates: Vec<UserId> = items.iter().copied().collect();
            let ranked = recommender.grade_candidates(user, &candidates)?;
            let top: Vec<UserId> = ranked
                .iter()
                .take(recommender.k)
                .map(|&(item, _)| item)
                .collect();
            let class = recommender
                .profiles
                .get(user)
                .ok_or(Error::UnknownUser(user))?
                .class;
            Ok((user, class, ap_at_k(&top, accepted, recommender.k)))
        })
        .collect::<Result<_>>()?;
    Ok(map_at_k(evaluated))
}

/// Run the full pipeline over a loaded corpus.
pub fn run_pipeline(dataset: &Dataset, config: &PipelineConfig) -> Result<PipelineArtifacts> {
    config.validate()?;
    let familiarity = config.familiarity_weights()?;
    let depths = config.depth_policy()?;

    // Stage 1: synonym mining.
    let classes = mine_keyword_classes(dataset, &config.mining());

    // Stage 2: taxonomy.
    let taxonomy = classify_all(dataset, &config.taxonomy());

    // Stage 3: interests and indexes.
    let index = InterestIndex::build(dataset, &classes);
    let popularity = build_popularity(dataset);
    let profiles = build_profiles(dataset, &classes, &taxonomy, &familiarity, &depths);

    // Stage 4: training on the earlier records.
    let (train_records, test_records) = split_by_time(dataset.rec_log(), config.train_split);
    let deps = TrainerDeps {
        dataset,
        classes: &classes,
        profiles: &profiles,
        index: &index,
        popularity: &popularity,
        familiarity,
        depths,
        lambda: config.lambda,
    };
    let states = train_all(train_records, &taxonomy, &deps, &config.training())?;
    let trained = aggregate_params(&states, &taxonomy, &config.default_trained_params());

    let params = ClassParams {
        active: GradingParams::new(trained[&UserClass::Active].alpha1, config.lambda)?,
        inactive: GradingParams::new(trained[&UserClass::Inactive].alpha1, config.lambda)?,
    };
    let history = config
        .use_time_decay
        .then(|| AcceptanceHistory::build(train_records, dataset));

    // Stage 5: recommendation and evaluation with the trained parameters.
    let recommender = Recommender {
        dataset,
        profiles: &profiles,
        index: &index,
        popularity: &popularity,
        params: &params,
        history: history.as_ref(),
        k: config.k,
    };
    let recommendations = recommender.recommend_all()?;
    let report = evaluate_records(&recommender, test_records)?;

    Ok(PipelineArtifacts {
        classes,
        taxonomy,
        trained,
        recommendations,
        report,
    })
}

// ---------------------------------------------------------------------------
// Artifact serialization
// ---------------------------------------------------------------------------

/// `class-id \t comma-separated keyword ids \t global support`.
pub fn format_mining_report(classes: &KeywordClassSet) -> String {
    let mut out = String::new();
    for (id, class) in classes.iter() {
        let keywords = class
            .keywords
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(out, "{}\t{}\t{:.6}", id.0, keywords, class.support);
    }
    out
}

/// `user-id \t class \t activeness`.
pub fn format_taxonomy(taxonomy: &Taxonomy) -> String {
    let mut out = String::new();
    for (user, class, act) in taxonomy.iter() {
        let _ = writeln!(out, "{user}\t{class}\t{act}");
    }
    out
}

/// `user-class \t alpha1 \t omega1 \t omega2 \t omega3`.
pub fn format_params(trained: &BTreeMap<UserClass, TrainedParams>) -> String {
    let mut out = String::new();
    for (class, p) in trained {
        let _ = writeln!(
            out,
            "{class}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
            p.alpha1, p.omega1, p.omega2, p.omega3
        );
    }
    out
}

/// `user-id \t item-id \t rank-position \t grade`, one line per slot.
pub fn format_recommendations(recommendations: &[Recommendation]) -> String {
    let mut out = String::new();
    for rec in recommendations {
        for (position, &(item, grade)) in rec.entries.iter().enumerate() {
            let _ = writeln!(out, "{}\t{item}\t{}\t{grade:.6}", rec.user, position + 1);
        }
    }
    out
}

/// Per-user, per-class and overall rows of the evaluation report.
pub fn format_eval_report(report: &EvalReport) -> String {
    let mut out = String::new();
    for &(user, class, ap) in &report.per_user {
        let _ = writeln!(out, "user\t{user}\t{class}\t{ap:.6}");
    }
    for (class, &(map, count)) in &report.per_class {
        let _ = writeln!(out, "class\t{class}\t{map:.6}\t{count}");
    }
    if let Some((map, count)) = report.overall {
        let _ = writeln!(out, "overall\t{map:.6}\t{count}");
    }
    out
}

/// Write every artifact file under `dir`.
pub fn write_artifacts(artifacts: &PipelineArtifacts, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let write = |name: &str, contents: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(path.display().to_string(), e))
    };
    write("keyword_classes.tsv", format_mining_report(&artifacts.classes))?;
    write("taxonomy.tsv", format_taxonomy(&artifacts.taxonomy))?;
    write("params.tsv", format_params(&artifacts.trained))?;
    write(
        "recommendations.tsv",
        format_recommendations(&artifacts.recommendations),
    )?;
    write("evaluation.tsv", format_eval_report(&artifacts.report))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{load_dataset, DatasetPaths, LoadMode};
    use crate::fixture;
    use tempfile::TempDir;

    fn load_fixture(files: &fixture::FixtureFiles) -> Dataset {
        let dir = TempDir::new().unwrap();
        files.write_to(dir.path()).unwrap();
        load_dataset(&DatasetPaths::in_dir(dir.path()), LoadMode::Strict)
            .unwrap()
            .0
    }

    #[test]
    fn split_follows_timestamp_quantile() {
        let record = |ts| RecLogRecord {
            user: UserId(1),
            item: UserId(2),
            outcome: Outcome::Accepted,
            timestamp: ts,
        };
        let records: Vec<RecLogRecord> = (1..=10).map(record).collect();
        let (train, test) = split_by_time(&records, 0.8);
        assert_eq!(train.len(), 8);
        assert_eq!(test.len(), 2);
        let (train, test) = split_by_time(&records, 1.0);
        assert_eq!((train.len(), test.len()), (10, 0));
        let (train, test) = split_by_time(&records, 0.0);
        assert_eq!((train.len(), test.len()), (0, 10));

        // Ties at the cutoff stay in the train split.
        let tied: Vec<RecLogRecord> = vec![record(1), record(2), record(2), record(3)];
        let (train, _) = split_by_time(&tied, 0.5);
        assert_eq!(train.len(), 3);
    }

    #[test]
    fn pipeline_is_deterministic_on_smallnet() {
        let ds = load_fixture(&fixture::smallnet());
        let config = fixture::smallnet_config();
        let a = run_pipeline(&ds, &config).unwrap();
        let b = run_pipeline(&ds, &config).unwrap();
        assert_eq!(a, b);

        let out_a = TempDir::new().unwrap();
        let out_b = TempDir::new().unwrap();
        write_artifacts(&a, out_a.path()).unwrap();
        write_artifacts(&b, out_b.path()).unwrap();
        for name in [
            "keyword_classes.tsv",
            "taxonomy.tsv",
            "params.tsv",
            "recommendations.tsv",
            "evaluation.tsv",
        ] {
            let bytes_a = fs::read(out_a.path().join(name)).unwrap();
            let bytes_b = fs::read(out_b.path().join(name)).unwrap();
            assert_eq!(bytes_a, bytes_b, "artifact {name} differs");
            assert!(!bytes_a.is_empty(), "artifact {name} is empty");
        }
    }

    #[test]
    fn deeper_search_does_not_hurt_map_on_smallnet() {
        let ds = load_fixture(&fixture::smallnet());
        let mut config = fixture::smallnet_config();
        config.depth_active = 0;
        config.depth_inactive = 0;
        let shallow = run_pipeline(&ds, &config).unwrap();
        config.depth_active = 2;
        config.depth_inactive = 2;
        let deep = run_pipeline(&ds, &config).unwrap();
        let shallow_map = shallow.report.overall_map().unwrap();
        let deep_map = deep.report.overall_map().unwrap();
        assert!(
            deep_map >= shallow_map,
            "depth 2 MAP {deep_map} < depth 0 MAP {shallow_map}"
        );
        // The followees genuinely predict the acceptances, so the deep run
        // should be strictly better here.
        assert!(deep_map > shallow_map);
    }

    #[test]
    fn all_fake_corpus_reduces_to_global_hot() {
        let ds = load_fixture(&fixture::allfake());
        let config = fixture::allfake_config();
        let artifacts = run_pipeline(&ds, &config).unwrap();

        // Mining over a keywordless corpus finds nothing.
        assert!(artifacts.classes.is_empty());
        for (_, class, _) in artifacts.taxonomy.iter() {
            assert_eq!(class, UserClass::Fake);
        }
        // Every non-bot user gets the three globally hottest items.
        let by_user: BTreeMap<UserId, Vec<UserId>> = artifacts
            .recommendations
            .iter()
            .map(|r| (r.user, r.entries.iter().map(|e| e.0).collect()))
            .collect();
        for id in 1..=30u64 {
            assert_eq!(
                by_user[&UserId(id)],
                vec![UserId(900), UserId(901), UserId(902)],
                "user {id}"
            );
        }
    }
}
