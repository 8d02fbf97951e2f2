//! Train the grading parameters online (one pass, momentum) on the earlier
//! 80% of the log and print the per-class averages.
//!
//! Run with: cargo run --example train_params

use std::path::PathBuf;

use microrec::dataset::{load_dataset, DatasetPaths, LoadMode};
use microrec::interest::{build_profiles, DepthPolicy, FamiliarityWeights, InterestIndex};
use microrec::mining::{mine_keyword_classes, MiningConfig};
use microrec::pipeline::split_by_time;
use microrec::scoring::build_popularity;
use microrec::taxonomy::{classify_all, TaxonomyConfig};
use microrec::training::{aggregate_params, train_all, TrainedParams, TrainerDeps, TrainingConfig};

fn main() -> microrec::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/smallnet");
    let (corpus, _) = load_dataset(&DatasetPaths::in_dir(dir), LoadMode::Strict)?;

    let classes = mine_keyword_classes(
        &corpus,
        &MiningConfig {
            supp_local: 0.1,
            supp_global: 0.1,
            ..MiningConfig::default()
        },
    );
    let taxonomy = classify_all(&corpus, &TaxonomyConfig::default());
    let index = InterestIndex::build(&corpus, &classes);
    let popularity = build_popularity(&corpus);
    let familiarity = FamiliarityWeights::default();
    let depths = DepthPolicy::default();
    let profiles = build_profiles(&corpus, &classes, &taxonomy, &familiarity, &depths);

    let (train_records, test_records) = split_by_time(corpus.rec_log(), 0.8);
    println!(
        "log split: {} training records, {} held out",
        train_records.len(),
        test_records.len()
    );

    let deps = TrainerDeps {
        dataset: &corpus,
        classes: &classes,
        profiles: &profiles,
        index: &index,
        popularity: &popularity,
        familiarity,
        depths,
        lambda: 2.0,
    };
    let config = TrainingConfig {
        seed: 42,
        ..TrainingConfig::default()
    };
    let states = train_all(train_records, &taxonomy, &deps, &config)?;
    println!("trained {} users (fake users are skipped)", states.len());

    let default = TrainedParams {
        alpha1: 0.33,
        omega1: 1.0 / 3.0,
        omega2: 1.0 / 3.0,
        omega3: 1.0 / 3.0,
    };
    let defaults = [
        (microrec::taxonomy::UserClass::Active, default),
        (
            microrec::taxonomy::UserClass::Inactive,
            TrainedParams {
                alpha1: 0.18,
                ..default
            },
        ),
    ]
    .into_iter()
    .collect();
    let trained = aggregate_params(&states, &taxonomy, &defaults);

    println!("class      alpha1   omega1  omega2  omega3");
    for (class, p) in &trained {
        println!(
            "{class:<10} {:.4}   {:.4}  {:.4}  {:.4}",
            p.alpha1, p.omega1, p.omega2, p.omega3
        );
    }
    Ok(())
}
