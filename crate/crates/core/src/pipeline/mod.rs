//! Resumable stages from a corpus manifest to a report bundle.
//!
//! Each stage writes into `<output>/<stage>/` and records a
//! [`StageArtifact`] under `<output>/.stages/`. A stage is skipped when its
//! configuration digest, the content digests of its upstream stages and its
//! own output on disk all match the recorded artifact.

mod config;
mod manifest;
mod report;
mod stages;
pub mod store;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::measures::{Registry, CATALOG_VERSION};

pub use config::{
    CvSection, EmbedSection, Overrides, PipelineConfig, PolicySection, SelectionSection, DEFAULT_EMBED_CAP,
    DEFAULT_SEPARABLE_THRESHOLD,
};
pub use manifest::{read_manifest, ManifestEntry};
pub use report::TOP_SCORES;
pub use stages::{DomainFilter, DomainSelection, FilterOutput, SelectOutput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Measure,
    Assemble,
    Filter,
    Select,
    Report,
    Embed,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Ingest,
        Stage::Measure,
        Stage::Assemble,
        Stage::Filter,
        Stage::Select,
        Stage::Report,
        Stage::Embed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Measure => "measure",
            Stage::Assemble => "assemble",
            Stage::Filter => "filter",
            Stage::Select => "select",
            Stage::Report => "report",
            Stage::Embed => "embed",
        }
    }

    pub fn upstream(self) -> &'static [Stage] {
        match self {
            Stage::Ingest => &[],
            Stage::Measure => &[Stage::Ingest],
            Stage::Assemble => &[Stage::Measure],
            Stage::Filter => &[Stage::Assemble],
            Stage::Select => &[Stage::Assemble, Stage::Filter],
            Stage::Report => &[Stage::Ingest, Stage::Measure, Stage::Assemble, Stage::Filter, Stage::Select],
            Stage::Embed => &[Stage::Assemble],
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown stage `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageArtifact {
    pub stage: String,
    pub content_digest: String,
    pub config_digest: String,
    /// Upstream stage → its content digest when this stage ran.
    pub upstream: BTreeMap<String, String>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ran,
    UpToDate,
}

#[derive(Clone, Debug)]
pub struct StageRun {
    pub stage: Stage,
    pub outcome: Outcome,
    pub artifact: StageArtifact,
}

pub struct Pipeline {
    config: PipelineConfig,
    registry: Registry,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        let registry = Registry::core().with_options(config.engine);
        Self::with_registry(config, registry)
    }

    /// Uses a custom measure catalog, e.g. the core one plus extensions.
    pub fn with_registry(config: PipelineConfig, registry: Registry) -> Result<Self> {
        config.validate()?;
        Ok(Pipeline { config, registry })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn stage_dir(&self, stage: Stage) -> PathBuf {
        self.config.output.join(stage.name())
    }

    fn artifact_path(&self, stage: Stage) -> PathBuf {
        self.config.output.join(".stages").join(format!("{}.json", stage.name()))
    }

    pub fn artifact(&self, stage: Stage) -> Option<StageArtifact> {
        let path = self.artifact_path(stage);
        if !path.exists() || !self.stage_dir(stage).is_dir() {
            return None;
        }
        store::read_json(&path).ok()
    }

    /// Digest of everything in the configuration (and, for ingest, the raw
    /// inputs) that the stage's output depends on.
    pub fn config_digest(&self, stage: Stage) -> Result<String> {
        let c = &self.config;
        let value = match stage {
            Stage::Ingest => {
                let mut inputs = BTreeMap::new();
                let manifest = fs::read(&c.manifest).map_err(|e| Error::io(&c.manifest, e))?;
                inputs.insert("<manifest>".to_owned(), store::sha256_hex(&manifest));
                for entry in read_manifest(&c.manifest)? {
                    // Unreadable inputs are reported by the stage itself.
                    let digest = fs::read(&entry.path).map(|b| store::sha256_hex(&b)).unwrap_or_default();
                    inputs.insert(entry.network_id, digest);
                }
                json!({ "auto_project": c.auto_project, "inputs": inputs })
            }
            Stage::Measure => {
                let seed = self.registry.has_seeded_measures().then(|| c.seed_for("measure"));
                json!({
                    "budgets": c.budgets,
                    "catalog": self.registry.feature_columns(),
                    "catalog_version": CATALOG_VERSION,
                    "engine": c.engine,
                    "seed": seed,
                })
            }
            Stage::Assemble => json!({ "policy": c.policy() }),
            Stage::Filter => json!({ "threshold": c.selection.correlation_threshold }),
            Stage::Select => json!({
                "cv": c.cv(),
                "forest": c.forest,
                "selection": c.selection_options(),
                "undersample_cap": c.undersample_cap,
                "undersample_seed": c.undersample_cap.map(|_| c.seed_for("undersample")),
            }),
            Stage::Report => json!({
                "separable_threshold": c.selection.separable_threshold,
                "top_scores": TOP_SCORES,
            }),
            Stage::Embed => json!({ "embed": c.embed, "seed": c.seed_for("embed") }),
        };
        Ok(store::sha256_hex(store::to_json(&value)?.as_bytes()))
    }

    fn upstream_digests(&self, stage: Stage) -> Result<BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        for &up in stage.upstream() {
            let artifact = self.artifact(up).ok_or_else(|| Error::MissingUpstream {
                stage: stage.name().into(),
                missing: up.name().into(),
            })?;
            out.insert(up.name().to_owned(), artifact.content_digest);
        }
        Ok(out)
    }

    /// Runs `stage` unless its recorded artifact is still current.
    pub fn run_stage(&self, stage: Stage) -> Result<StageRun> {
        let upstream = self.upstream_digests(stage)?;
        let config_digest = self.config_digest(stage)?;
        if let Some(artifact) = self.artifact(stage) {
            if artifact.config_digest == config_digest
                && artifact.upstream == upstream
                && store::digest_dir(&self.stage_dir(stage))? == artifact.content_digest
            {
                return Ok(StageRun {
                    stage,
                    outcome: Outcome::UpToDate,
                    artifact,
                });
            }
        }
        let staged = self.config.output.join(".tmp").join(stage.name());
        if staged.exists() {
            fs::remove_dir_all(&staged).map_err(|e| Error::io(&staged, e))?;
        }
        fs::create_dir_all(&staged).map_err(|e| Error::io(&staged, e))?;
        match stage {
            Stage::Ingest => stages::ingest(self, &staged),
            Stage::Measure => stages::measure(self, &staged),
            Stage::Assemble => stages::assemble(self, &staged),
            Stage::Filter => stages::filter(self, &staged),
            Stage::Select => stages::select(self, &staged),
            Stage::Report => report::emit(self, &staged),
            Stage::Embed => stages::embed(self, &staged),
        }?;
        let content_digest = store::digest_dir(&staged)?;
        store::commit_dir(&staged, &self.stage_dir(stage))?;
        let artifact = StageArtifact {
            stage: stage.name().into(),
            content_digest,
            config_digest,
            upstream,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let path = self.artifact_path(stage);
        store::write(&path.with_extension("json.tmp"), store::to_json(&artifact)?.as_bytes())?;
        fs::rename(path.with_extension("json.tmp"), &path).map_err(|e| Error::io(&path, e))?;
        Ok(StageRun {
            stage,
            outcome: Outcome::Ran,
            artifact,
        })
    }

    /// Runs every stage in order.
    pub fn run_all(&self) -> Result<Vec<StageRun>> {
        Stage::ALL.into_iter().map(|s| self.run_stage(s)).collect()
    }

    /// Directory holding the report bundle.
    pub fn report_dir(&self) -> PathBuf {
        self.stage_dir(Stage::Report)
    }
}

/// File-name-safe form of a domain label, prefixed by its position so that
/// distinct labels never collide.
pub fn domain_slug(index: usize, domain: &str) -> String {
    let cleaned: String = domain
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("{index:02}-{cleaned}")
}
