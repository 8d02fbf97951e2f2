//! Produce graded top-3 recommendations for an active, an inactive and a
//! fake user.
//!
//! Run with: cargo run --example recommend_top3

use std::path::PathBuf;

use microrec::dataset::{load_dataset, DatasetPaths, LoadMode, UserId};
use microrec::interest::{build_profiles, DepthPolicy, FamiliarityWeights, InterestIndex};
use microrec::mining::{mine_keyword_classes, MiningConfig};
use microrec::scoring::{build_popularity, ClassParams, Recommender};
use microrec::taxonomy::{classify_all, TaxonomyConfig};

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

    for user in [UserId(2), UserId(61), UserId(141)] {
        let class = taxonomy.class(user).unwrap();
        let recommendation = recommender.recommend(user)?;
        println!("user {user} ({class}):");
        for (position, (item, grade)) in recommendation.entries.iter().enumerate() {
            let category = corpus.category(corpus.item(*item).unwrap().category);
            println!("  {}. item {item} [{category}]  grade {grade:+.4}", position + 1);
        }
    }
    Ok(())
}
