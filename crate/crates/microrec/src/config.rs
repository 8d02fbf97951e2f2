//! Pipeline configuration: one flat key=value file covering every tunable.
//!
//! Lines are `key = value`; `#` starts a comment. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::interest::{DepthPolicy, FamiliarityWeights, SearchDepth};
use crate::mining::MiningConfig;
use crate::scoring::{ClassParams, GradingParams};
use crate::taxonomy::{TaxonomyConfig, UserClass};
use crate::training::{TrainedParams, TrainingConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    // Mining
    pub n_sites: usize,
    pub n_polling_sites: usize,
    pub supp_local: f64,
    pub supp_global: f64,
    pub conf_local: f64,
    pub conf_global: f64,
    pub max_itemset_size: usize,
    // Taxonomy
    pub min_activeness: u64,
    pub min_action: u64,
    // Interests
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub depth_active: u32,
    pub depth_inactive: u32,
    // Grading
    pub alpha1_active: f64,
    pub alpha1_inactive: f64,
    pub lambda: f64,
    pub k: usize,
    pub use_time_decay: bool,
    // Training
    pub beta: f64,
    pub performance: f64,
    pub eta: f64,
    pub train_omegas: bool,
    pub seed: u64,
    // Harness
    pub train_split: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            n_sites: 4,
            n_polling_sites: 4,
            supp_local: 0.2,
            supp_global: 0.2,
            conf_local: 0.7,
            conf_global: 0.7,
            max_itemset_size: 5,
            min_activeness: 100,
            min_action: 20,
            omega1: 1.0 / 3.0,
            omega2: 1.0 / 3.0,
            omega3: 1.0 / 3.0,
            depth_active: 1,
            depth_inactive: 2,
            alpha1_active: crate::scoring::DEFAULT_ACTIVE_ALPHA1,
            alpha1_inactive: crate::scoring::DEFAULT_INACTIVE_ALPHA1,
            lambda: crate::scoring::DEFAULT_LAMBDA,
            k: 3,
            use_time_decay: false,
            beta: 0.9,
            performance: 0.01,
            eta: 1.0,
            train_omegas: false,
            seed: 0,
            train_split: 0.8,
        }
    }
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for key {key:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "on" | "yes" => Ok(true),
        "false" | "0" | "off" | "no" => Ok(false),
        other => Err(Error::Config(format!(
            "invalid boolean {other:?} for key {key:?}"
        ))),
    }
}

impl PipelineConfig {
    /// Apply one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n_sites" => self.n_sites = parse_value(key, value)?,
            "n_polling_sites" => self.n_polling_sites = parse_value(key, value)?,
            "supp_local" => self.supp_local = parse_value(key, value)?,
            "supp_global" => self.supp_global = parse_value(key, value)?,
            "conf_local" => self.conf_local = parse_value(key, value)?,
            "conf_global" => self.conf_global = parse_value(key, value)?,
            "max_itemset_size" => self.max_itemset_size = parse_value(key, value)?,
            "min_activeness" => self.min_activeness = parse_value(key, value)?,
            "min_action" => self.min_action = parse_value(key, value)?,
            "omega1" => self.omega1 = parse_value(key, value)?,
            "omega2" => self.omega2 = parse_value(key, value)?,
            "omega3" => self.omega3 = parse_value(key, value)?,
            "depth_active" => self.depth_active = parse_value(key, value)?,
            "depth_inactive" => self.depth_inactive = parse_value(key, value)?,
            "alpha1_active" => self.alpha1_active = parse_value(key, value)?,
            "alpha1_inactive" => self.alpha1_inactive = parse_value(key, value)?,
            "lambda" => self.lambda = parse_value(key, value)?,
            "k" => self.k = parse_value(key, value)?,
            "use_time_decay" => self.use_time_decay = parse_bool(key, value)?,
            "beta" => self.beta = parse_value(key, value)?,
            "performance" => self.performance = parse_value(key, value)?,
            "eta" => self.eta = parse_value(key, value)?,
            "train_omegas" => self.train_omegas = parse_bool(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "train_split" => self.train_split = parse_value(key, value)?,
            other => return Err(Error::Config(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Parse a whole key=value document on top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut config = PipelineConfig::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "line {}: expected key = value, got {line:?}",
                    no + 1
                )));
            };
            config.set(key.trim(), value.trim())?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_text(&text)
    }

    /// Check every cross-field invariant; the typed accessors below assume
    /// this has passed.
    pub fn validate(&self) -> Result<()> {
        let check_unit_threshold = |name: &str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "{name} must lie in (0, 1], got {v}"
                )))
            }
        };
        check_unit_threshold("supp_local", self.supp_local)?;
        check_unit_threshold("supp_global", self.supp_global)?;
        check_unit_threshold("conf_local", self.conf_local)?;
        check_unit_threshold("conf_global", self.conf_global)?;
        if self.n_sites < 1 {
            return Err(Error::Config("n_sites must be at least 1".into()));
        }
        if self.n_polling_sites < 1 {
            return Err(Error::Config("n_polling_sites must be at least 1".into()));
        }
        if self.max_itemset_size < 1 {
            return Err(Error::Config("max_itemset_size must be at least 1".into()));
        }
        self.familiarity_weights()?;
        self.depth_policy()?;
        self.class_params()?;
        self.training().validate()?;
        if !(0.0..=1.0).contains(&self.train_split) {
            return Err(Error::Config(format!(
                "train_split must lie in [0, 1], got {}",
                self.train_split
            )));
        }
        if self.k < 1 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        Ok(())
    }

    pub fn mining(&self) -> MiningConfig {
        MiningConfig {
            supp_local: self.supp_local,
            supp_global: self.supp_global,
            conf_local: self.conf_local,
            conf_global: self.conf_global,
            n_sites: self.n_sites,
            n_polling_sites: self.n_polling_sites,
            max_itemset_size: self.max_itemset_size,
        }
    }

    pub fn taxonomy(&self) -> TaxonomyConfig {
        TaxonomyConfig {
            min_activeness: self.min_activeness,
            min_action: self.min_action,
        }
    }

    pub fn familiarity_weights(&self) -> Result<FamiliarityWeights> {
        FamiliarityWeights::new(self.omega1, self.omega2, self.omega3)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn depth_policy(&self) -> Result<DepthPolicy> {
        Ok(DepthPolicy {
            active: SearchDepth::new(self.depth_active)
                .map_err(|e| Error::Config(e.to_string()))?,
            inactive: SearchDepth::new(self.depth_inactive)
                .map_err(|e| Error::Config(e.to_string()))?,
        })
    }

    pub fn class_params(&self) -> Result<ClassParams> {
        Ok(ClassParams {
            active: GradingParams::new(self.alpha1_active, self.lambda)
                .map_err(|e| Error::Config(e.to_string()))?,
            inactive: GradingParams::new(self.alpha1_inactive, self.lambda)
                .map_err(|e| Error::Config(e.to_string()))?,
        })
    }

    pub fn training(&self) -> TrainingConfig {
        TrainingConfig {
            beta: self.beta,
            performance: self.performance,
            eta: self.eta,
            train_omegas: self.train_omegas,
            use_time_decay: self.use_time_decay,
            seed: self.seed,
        }
    }

    /// Configured per-class parameter defaults, used when a class has no
    /// trained users.
    pub fn default_trained_params(&self) -> BTreeMap<UserClass, TrainedParams> {
        let with_alpha = |alpha1: f64| TrainedParams {
            alpha1,
            omega1: self.omega1,
            omega2: self.omega2,
            omega3: self.omega3,
        };
        [
            (UserClass::Active, with_alpha(self.alpha1_active)),
            (UserClass::Inactive, with_alpha(self.alpha1_inactive)),
        ]
        .into_iter()
        .collect()
    }
}
