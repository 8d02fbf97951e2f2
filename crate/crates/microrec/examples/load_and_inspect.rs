//! Load the bundled corpus and print what came out of the files.
//!
//! Run with: cargo run --example load_and_inspect

use std::path::PathBuf;

use microrec::dataset::{load_dataset, DatasetPaths, LoadMode};

fn main() -> microrec::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/smallnet");
    let (corpus, report) = load_dataset(&DatasetPaths::in_dir(&dir), LoadMode::Lenient)?;

    println!("loaded {}", dir.display());
    println!("  users:        {}", corpus.user_count());
    println!("  items:        {}", corpus.item_count());
    println!("  categories:   {}", corpus.categories().count());
    println!("  follow edges: {}", corpus.follow_edges().count());
    println!("  interactions: {}", corpus.interactions().count());
    println!("  log records:  {}", corpus.rec_log().len());
    println!("  skipped lines: {}", report.total_skipped());

    for (id, path) in corpus.categories() {
        println!(
            "  category {path}: {} items",
            corpus.items_in_category(id).len()
        );
    }

    // Keyword weights are normalized on load.
    let user = corpus.users().find(|u| !u.keywords.is_empty()).unwrap();
    println!("user {} keyword weights (sum 1):", user.id);
    for (keyword, weight) in user.keywords.iter() {
        println!("  {keyword} -> {weight}");
    }
    Ok(())
}
