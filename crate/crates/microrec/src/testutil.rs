//! Small corpus builder for unit tests: writes the TSV files to a temp dir
//! and loads them through the real parser.

use std::fs;

use tempfile::TempDir;

use crate::dataset::{load_dataset, Dataset, DatasetPaths, LoadMode};

#[derive(Default)]
pub struct CorpusBuilder {
    profiles: Vec<String>,
    keywords: Vec<String>,
    items: Vec<String>,
    sns: Vec<String>,
    actions: Vec<String>,
    log: Vec<String>,
}

impl CorpusBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn user(mut self, id: u64, tweets: u64) -> Self {
        self.profiles.push(format!("{id}\t{tweets}"));
        self
    }

    /// `spec` is the raw keyword field, e.g. `"1:0.5;2:0.5"`.
    pub fn keywords(mut self, id: u64, spec: &str) -> Self {
        self.keywords.push(format!("{id}\t{spec}"));
        self
    }

    pub fn item(mut self, id: u64, category: &str, keywords: &str) -> Self {
        self.items.push(format!("{id}\t{category}\t{keywords}"));
        self
    }

    pub fn follow(mut self, follower: u64, followee: u64) -> Self {
        self.sns.push(format!("{follower}\t{followee}"));
        self
    }

    pub fn action(mut self, source: u64, target: u64, at: u64, retweet: u64, comment: u64) -> Self {
        self.actions
            .push(format!("{source}\t{target}\t{at}\t{retweet}\t{comment}"));
        self
    }

    pub fn record(mut self, user: u64, item: u64, result: i64, timestamp: i64) -> Self {
        self.log
            .push(format!("{user}\t{item}\t{result}\t{timestamp}"));
        self
    }

    pub fn build(self) -> Dataset {
        let dir = TempDir::new().unwrap();
        let join = |rows: &[String]| {
            if rows.is_empty() {
                String::new()
            } else {
                rows.join("\n") + "\n"
            }
        };
        fs::write(dir.path().join("user_profile.tsv"), join(&self.profiles)).unwrap();
        fs::write(dir.path().join("user_key_word.tsv"), join(&self.keywords)).unwrap();
        fs::write(dir.path().join("item.tsv"), join(&self.items)).unwrap();
        fs::write(dir.path().join("user_sns.tsv"), join(&self.sns)).unwrap();
        fs::write(dir.path().join("user_action.tsv"), join(&self.actions)).unwrap();
        fs::write(dir.path().join("rec_log.tsv"), join(&self.log)).unwrap();
        load_dataset(&DatasetPaths::in_dir(dir.path()), LoadMode::Strict)
            .unwrap()
            .0
    }
}
