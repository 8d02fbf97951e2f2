//! Sort users into active / inactive / fake by tweet count gated on their
//! interaction totals.
//!
//! Run with: cargo run --example classify_users

use std::path::PathBuf;

use microrec::dataset::{load_dataset, DatasetPaths, LoadMode};
use microrec::taxonomy::{classify_all, TaxonomyConfig, UserClass};

fn main() -> microrec::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/smallnet");
    let (corpus, _) = load_dataset(&DatasetPaths::in_dir(dir), LoadMode::Strict)?;

    let config = TaxonomyConfig::default();
    let taxonomy = classify_all(&corpus, &config);

    println!(
        "taxonomy with min_activeness = {}, min_action = {}:",
        config.min_activeness, config.min_action
    );
    for class in UserClass::ALL {
        println!("  {class:<8} {} users", taxonomy.count(class));
    }

    println!("\nsample users:");
    for (user, class, act) in taxonomy.iter().take(5) {
        let tweets = corpus.user(user).unwrap().tweet_count;
        let interactions = corpus.outgoing_interaction_total(user);
        println!(
            "  user {user}: {tweets} tweets, {interactions} interactions -> act {act} -> {class}"
        );
    }
    Ok(())
}
