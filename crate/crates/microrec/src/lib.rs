//! # microrec
//!
//! A batch hybrid follow recommender for microblog-style datasets. The
//! pipeline mines synonym keyword classes from user keywords, sorts users
//! into active/inactive/fake classes, extracts (potential) interests over
//! the follow graph, grades candidate items by fondness, popularity and
//! similarity, trains the grading parameters online with momentum, and
//! evaluates ranked output with AP@3 / MAP@3.
//!
//! The crate is primarily a library; see the `examples/` directory for one
//! runnable program per capability, and the thin `microrec` binary for the
//! matching command line (`mine`, `classify`, `profile`, `train`,
//! `recommend`, `evaluate`, `pipeline`).
//!
//! ```no_run
//! use microrec::dataset::{load_dataset, DatasetPaths, LoadMode};
//! use microrec::config::PipelineConfig;
//! use microrec::pipeline::run_pipeline;
//!
//! let paths = DatasetPaths::in_dir("data/");
//! let (corpus, _report) = load_dataset(&paths, LoadMode::Lenient)?;
//! let artifacts = run_pipeline(&corpus, &PipelineConfig::default())?;
//! println!("{}", artifacts.report.summary());
//! # Ok::<(), microrec::Error>(())
//! ```

pub mod config;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod fixture;
pub mod interest;
pub mod mining;
pub mod pipeline;
pub mod scoring;
pub mod taxonomy;
pub mod training;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
