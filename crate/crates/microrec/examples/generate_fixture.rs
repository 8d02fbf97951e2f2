//! Regenerate the bundled synthetic corpora (the TSV fixtures under
//! fixtures/). Generation is deterministic, so running this leaves a clean
//! checkout unchanged.
//!
//! Run with: cargo run --example generate_fixture [TARGET_DIR]

use std::path::PathBuf;

use microrec::fixture;

fn main() -> microrec::Result<()> {
    let base = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"));

    let smallnet = base.join("smallnet");
    fixture::smallnet().write_to(&smallnet)?;
    std::fs::write(
        smallnet.join("config.txt"),
        "# pipeline configuration tuned to the smallnet fixture\n\
         supp_local = 0.1\n\
         supp_global = 0.1\n\
         seed = 42\n",
    )
    .map_err(|e| microrec::Error::Io {
        path: smallnet.join("config.txt").display().to_string(),
        source: e,
    })?;
    println!("wrote {}", smallnet.display());

    let allfake = base.join("allfake");
    fixture::allfake().write_to(&allfake)?;
    println!("wrote {}", allfake.display());
    Ok(())
}
