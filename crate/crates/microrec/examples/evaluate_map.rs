//! Score ranked recommendations with AP@3 and MAP@3 on the held-out tail
//! of the log.
//!
//! Run with: cargo run --example evaluate_map

use std::collections::BTreeSet;
use std::path::PathBuf;

use microrec::dataset::{load_dataset, DatasetPaths, LoadMode, UserId};
use microrec::eval::ap_at_k;
use microrec::interest::{build_profiles, DepthPolicy, FamiliarityWeights, InterestIndex};
use microrec::mining::{mine_keyword_classes, MiningConfig};
use microrec::pipeline::{evaluate_records, split_by_time};
use microrec::scoring::{build_popularity, ClassParams, Recommender};
use microrec::taxonomy::{classify_all, TaxonomyConfig};

fn main() -> microrec::Result<()> {
    // The AP@3 shapes on their own.
    let list: Vec<UserId> = [10, 11, 12].into_iter().map(UserId).collect();
    let accepted: BTreeSet<UserId> = [UserId(10), UserId(12)].into_iter().collect();
    println!("AP@3, hits at ranks 1 and 3: {:.4}", ap_at_k(&list, &accepted, 3));
    let first_only: BTreeSet<UserId> = [UserId(10)].into_iter().collect();
    println!("AP@3, hit at rank 1 only:   {:.4}", ap_at_k(&list, &first_only, 3));
    let last_only: BTreeSet<UserId> = [UserId(12)].into_iter().collect();
    println!("AP@3, hit at rank 3 only:   {:.4}", ap_at_k(&list, &last_only, 3));

    // Full evaluation over the held-out records of the bundled corpus.
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
    let profiles = build_profiles(
        &corpus,
        &classes,
        &taxonomy,
        &FamiliarityWeights::default(),
        &DepthPolicy::default(),
    );
    let params = ClassParams::default();
    let recommender = Recommender {
        dataset: &corpus,
        profiles: &profiles,
        index: &index,
        popularity: &popularity,
        params: &params,
        history: None,
        k: 3,
    };

    let (_, test_records) = split_by_time(corpus.rec_log(), 0.8);
    let report = evaluate_records(&recommender, test_records)?;
    println!("\n{}", report.summary());
    Ok(())
}
