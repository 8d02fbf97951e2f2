//! Run the whole pipeline (mine, classify, profile, train, recommend,
//! evaluate) and write every artifact file.
//!
//! Run with: cargo run --example full_pipeline [OUT_DIR]

use std::path::PathBuf;

use microrec::config::PipelineConfig;
use microrec::dataset::{load_dataset, DatasetPaths, LoadMode};
use microrec::pipeline::{run_pipeline, write_artifacts};

fn main() -> microrec::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/smallnet");
    let (corpus, _) = load_dataset(&DatasetPaths::in_dir(&dir), LoadMode::Strict)?;

    let config = PipelineConfig::from_file(dir.join("config.txt"))?;
    let artifacts = run_pipeline(&corpus, &config)?;

    println!("mined classes: {}", artifacts.classes.len());
    println!("trained parameters:");
    for (class, p) in &artifacts.trained {
        println!("  {class}: alpha1 = {:.4}", p.alpha1);
    }
    println!("{}", artifacts.report.summary());

    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("microrec-pipeline"));
    write_artifacts(&artifacts, &out)?;
    println!("artifacts written to {}", out.display());
    Ok(())
}
