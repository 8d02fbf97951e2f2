//! Mine synonym keyword classes with the simulated distributed protocol
//! and show that the site count does not change the result.
//!
//! Run with: cargo run --example mine_classes

use std::path::PathBuf;

use microrec::dataset::{load_dataset, DatasetPaths, LoadMode};
use microrec::mining::{mine_keyword_classes, MiningConfig};

fn main() -> microrec::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/smallnet");
    let (corpus, _) = load_dataset(&DatasetPaths::in_dir(dir), LoadMode::Strict)?;

    let config = MiningConfig {
        supp_local: 0.1,
        supp_global: 0.1,
        ..MiningConfig::default()
    };
    let classes = mine_keyword_classes(&corpus, &config);

    println!(
        "mined {} keyword classes (supp {}, conf {}):",
        classes.len(),
        config.supp_global,
        config.conf_global
    );
    for (id, class) in classes.iter() {
        let keywords: Vec<String> = class.keywords.iter().map(|k| k.to_string()).collect();
        println!(
            "  class {} = {{{}}}  support {:.4}",
            id.0,
            keywords.join(", "),
            class.support
        );
    }

    // Partitioning the users differently leaves the classes untouched.
    for n_sites in [1, 2, 8] {
        let variant = mine_keyword_classes(
            &corpus,
            &MiningConfig {
                n_sites,
                n_polling_sites: n_sites,
                ..config.clone()
            },
        );
        println!(
            "  n_sites = {n_sites}: identical result = {}",
            variant == classes
        );
    }
    Ok(())
}
