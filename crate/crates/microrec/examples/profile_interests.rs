//! Extract a keyword-poor user's interests from their followees: the
//! familiarity-weighted potential interests merged with their own keyword
//! classes.
//!
//! Run with: cargo run --example profile_interests

use std::path::PathBuf;

use microrec::dataset::{load_dataset, DatasetPaths, LoadMode, UserId};
use microrec::interest::{
    key_class, merge_interests, potential_key, related_users, FamiliarityWeights, SearchDepth,
};
use microrec::mining::{mine_keyword_classes, MiningConfig};

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

    // User 61 is inactive and has no keywords of its own; everything it
    // likes has to come from the social graph.
    let user = UserId(61);
    let weights = FamiliarityWeights::default();
    let depth = SearchDepth::INACTIVE_DEFAULT;

    println!("related users of {user} up to depth {}:", depth.get());
    for (related, familiarity) in related_users(&corpus, user, depth, &weights) {
        println!("  {related}: familiarity {familiarity:.4}");
    }

    let own = key_class(&corpus.user(user).unwrap().keywords, &classes);
    let potential = potential_key(user, &corpus, &classes, &weights, depth);
    let merged = merge_interests(&own, &potential);

    println!("own interests:       {} classes", own.len());
    println!("potential interests:");
    for (class, weight) in potential.iter() {
        println!("  class {} -> {weight:.4}", class.0);
    }
    println!("merged interests:");
    for (class, weight) in merged.iter() {
        println!("  class {} -> {weight:.4}", class.0);
    }
    Ok(())
}
