use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::correlation;
use crate::dataset::PolicyConfig;
use crate::error::{Error, Result};
use crate::forest::{CvConfig, ForestParams};
use crate::measures::{BudgetPlan, EngineOptions};
use crate::seed;
use crate::selection::SelectionOptions;

/// Default per-domain cap on networks fed to the PCA embedding.
pub const DEFAULT_EMBED_CAP: usize = 500;
pub const DEFAULT_SEPARABLE_THRESHOLD: f64 = 0.7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicySection {
    pub network_missing_max: f64,
    pub feature_missing_max_per_domain: f64,
    pub constant_fraction: f64,
    pub min_domain_size: usize,
}

impl Default for PolicySection {
    fn default() -> Self {
        let p = PolicyConfig::default();
        PolicySection {
            network_missing_max: p.network_missing_max,
            feature_missing_max_per_domain: p.feature_missing_max_per_domain,
            constant_fraction: p.constant_fraction,
            min_domain_size: p.min_domain_size,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CvSection {
    pub folds: usize,
    pub repeats: usize,
}

impl Default for CvSection {
    fn default() -> Self {
        let cv = CvConfig::default();
        CvSection {
            folds: cv.folds,
            repeats: cv.repeats,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionSection {
    pub top_k: usize,
    pub max_combo_size: usize,
    pub correlation_threshold: f64,
    pub separable_threshold: f64,
}

impl Default for SelectionSection {
    fn default() -> Self {
        let o = SelectionOptions::default();
        SelectionSection {
            top_k: o.top_k,
            max_combo_size: o.max_size,
            correlation_threshold: correlation::DEFAULT_THRESHOLD,
            separable_threshold: DEFAULT_SEPARABLE_THRESHOLD,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbedSection {
    pub cap: usize,
    pub dims: usize,
}

impl Default for EmbedSection {
    fn default() -> Self {
        EmbedSection {
            cap: DEFAULT_EMBED_CAP,
            dims: 2,
        }
    }
}

/// Pipeline settings as read from TOML. Relative paths are resolved
/// against the config file's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub manifest: PathBuf,
    pub output: PathBuf,
    pub seed: Option<u64>,
    #[serde(default)]
    pub auto_project: bool,
    #[serde(default)]
    pub undersample_cap: Option<usize>,
    #[serde(default)]
    pub budgets: BudgetPlan,
    #[serde(default)]
    pub engine: EngineOptions,
    #[serde(default)]
    pub policy: PolicySection,
    #[serde(default)]
    pub forest: ForestParams,
    #[serde(default)]
    pub cv: CvSection,
    #[serde(default)]
    pub selection: SelectionSection,
    #[serde(default)]
    pub embed: EmbedSection,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub undersample_cap: Option<usize>,
    pub auto_project: bool,
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads `path`, resolves relative paths and applies `overrides`.
    pub fn load(path: &Path, overrides: Overrides) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.manifest = base.join(&config.manifest);
        config.output = base.join(&config.output);
        config.apply(overrides);
        config.validate()?;
        Ok(config)
    }

    pub fn apply(&mut self, overrides: Overrides) {
        if let Some(s) = overrides.seed {
            self.seed = Some(s);
        }
        if let Some(cap) = overrides.undersample_cap {
            self.undersample_cap = Some(cap);
        }
        self.auto_project |= overrides.auto_project;
    }

    pub fn validate(&self) -> Result<()> {
        if self.seed.is_none() {
            return Err(Error::Config("`seed` is required".into()));
        }
        self.budgets.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.policy().validate()?;
        self.forest.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.cv.folds < 2 || self.cv.repeats == 0 {
            return Err(Error::Config("cv needs folds >= 2 and repeats >= 1".into()));
        }
        self.selection_options().validate()?;
        let s = &self.selection;
        if !(0.0..=1.0).contains(&s.correlation_threshold) || !(0.0..=1.0).contains(&s.separable_threshold) {
            return Err(Error::Config("thresholds must lie in [0, 1]".into()));
        }
        if self.undersample_cap == Some(0) || self.embed.cap == 0 || self.embed.dims == 0 {
            return Err(Error::Config("caps and dims must be positive".into()));
        }
        if self.engine.sample_sources == 0 {
            return Err(Error::Config("sample_sources must be positive".into()));
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.expect("validated config has a seed")
    }

    /// Seed for one consumer, derived from the global seed.
    pub fn seed_for(&self, purpose: &str) -> u64 {
        seed::derive(self.seed(), &[seed::key(purpose)])
    }

    pub fn policy(&self) -> PolicyConfig {
        PolicyConfig {
            network_missing_max: self.policy.network_missing_max,
            feature_missing_max_per_domain: self.policy.feature_missing_max_per_domain,
            constant_fraction: self.policy.constant_fraction,
            min_domain_size: self.policy.min_domain_size,
            rng_seed: self.seed_for("impute"),
        }
    }

    pub fn cv(&self) -> CvConfig {
        CvConfig {
            folds: self.cv.folds,
            repeats: self.cv.repeats,
            seed: self.seed_for("cv"),
        }
    }

    pub fn selection_options(&self) -> SelectionOptions {
        SelectionOptions {
            top_k: self.selection.top_k,
            max_size: self.selection.max_combo_size,
        }
    }
}
