//! Scenario configuration files.
//!
//! Every group is optional; missing values are filled from the scenario's
//! defaults, and the fully resolved configuration is what the manifest
//! records. Unknown keys are rejected at every level.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

/// The published JSON schema for [`ScenarioConfig`].
pub const SCHEMA: &str = include_str!("../schema/scenario-config.schema.json");

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Physics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    /// Slit separation `L`; zero selects a single Gaussian packet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_points: usize,
    pub x_min: f64,
    pub x_max: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_len: Option<usize>,
}

/// Log-spaced parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub physics: Physics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub ensemble: EnsembleParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

/// The manifest form: a previous run's resolved configuration plus hashes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub scenario: String,
    pub seed: u64,
    pub config: ScenarioConfig,
    pub config_sha256: String,
    pub versions: Versions,
    pub format: String,
    pub files: Vec<FileEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Versions {
    #[serde(rename = "seqprob-cli")]
    pub cli: String,
    #[serde(rename = "seqprob-core")]
    pub core: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
}

impl ScenarioConfig {
    pub fn named(scenario: &str) -> Self {
        Self { scenario: scenario.to_string(), ..Default::default() }
    }

    /// Parses either a configuration or a manifest written by a previous run.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
        if value.get("config").is_some() {
            let m: Manifest =
                serde_json::from_value(value).map_err(|e| CliError::Config(format!("invalid manifest: {e}")))?;
            return Ok(m.config);
        }
        serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fills every missing value from `defaults`.
    pub fn merged_with(&self, defaults: &ScenarioConfig) -> ScenarioConfig {
        let p = &self.physics;
        let d = &defaults.physics;
        ScenarioConfig {
            scenario: self.scenario.clone(),
            seed: self.seed.or(defaults.seed),
            out: self.out.clone().or_else(|| defaults.out.clone()),
            physics: Physics {
                mass: p.mass.or(d.mass),
                times: p.times.clone().or_else(|| d.times.clone()),
                delta: p.delta.or(d.delta),
                deltas: p.deltas.clone().or_else(|| d.deltas.clone()),
                sigma: p.sigma.or(d.sigma),
                separation: p.separation.or(d.separation),
            },
            grid: self.grid.or(defaults.grid),
            ensemble: EnsembleParams {
                n_samples: self.ensemble.n_samples.or(defaults.ensemble.n_samples),
                block_len: self.ensemble.block_len.or(defaults.ensemble.block_len),
            },
            sweep: self.sweep.or(defaults.sweep),
        }
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serialises")
    }
}

/// Typed access to a resolved configuration, failing with a config error
/// when a value the scenario needs is missing or out of range.
pub(crate) struct Resolved<'a>(pub &'a ScenarioConfig);

impl Resolved<'_> {
    fn need<T: Clone>(&self, v: &Option<T>, name: &str) -> Result<T, CliError> {
        v.clone().ok_or_else(|| CliError::Config(format!("scenario {} needs `{name}`", self.0.scenario)))
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.need(&self.0.seed, "seed")
    }

    pub fn mass(&self) -> Result<f64, CliError> {
        positive(self.need(&self.0.physics.mass, "physics.mass")?, "physics.mass")
    }

    pub fn times(&self, n: usize) -> Result<Vec<f64>, CliError> {
        let t = self.need(&self.0.physics.times, "physics.times")?;
        if t.len() != n {
            return Err(CliError::Config(format!("physics.times needs {n} entries, got {}", t.len())));
        }
        if t.iter().any(|v| !v.is_finite() || *v < 0.0) || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("physics.times must be non-negative and increasing".into()));
        }
        Ok(t)
    }

    pub fn delta(&self) -> Result<f64, CliError> {
        positive(self.need(&self.0.physics.delta, "physics.delta")?, "physics.delta")
    }

    pub fn deltas(&self) -> Result<Vec<f64>, CliError> {
        let d = self.need(&self.0.physics.deltas, "physics.deltas")?;
        if d.is_empty() {
            return Err(CliError::Config("physics.deltas must not be empty".into()));
        }
        d.into_iter().map(|v| positive(v, "physics.deltas")).collect()
    }

    pub fn sigma(&self) -> Result<f64, CliError> {
        positive(self.need(&self.0.physics.sigma, "physics.sigma")?, "physics.sigma")
    }

    pub fn separation(&self) -> Result<f64, CliError> {
        let v = self.need(&self.0.physics.separation, "physics.separation")?;
        if v >= 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::Config(format!("physics.separation must be non-negative, got {v}")))
        }
    }

    pub fn grid(&self) -> Result<seqprob_core::qcore::Grid, CliError> {
        let g = self.need(&self.0.grid, "grid")?;
        seqprob_core::qcore::Grid::new(g.n_points, g.x_min, g.x_max).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn n_samples(&self) -> Result<usize, CliError> {
        let n = self.need(&self.0.ensemble.n_samples, "ensemble.n_samples")?;
        if n == 0 {
            return Err(CliError::Config("ensemble.n_samples must be at least 1".into()));
        }
        Ok(n)
    }

    pub fn block_len(&self) -> Result<usize, CliError> {
        let n = self.need(&self.0.ensemble.block_len, "ensemble.block_len")?;
        if n == 0 {
            return Err(CliError::Config("ensemble.block_len must be at least 1".into()));
        }
        Ok(n)
    }

    pub fn sweep(&self) -> Result<Sweep, CliError> {
        let s = self.need(&self.0.sweep, "sweep")?;
        if !(s.lo > 0.0 && s.hi > s.lo && s.hi.is_finite() && s.points >= 2) {
            return Err(CliError::Config("sweep needs 0 < lo < hi and at least 2 points".into()));
        }
        Ok(s)
    }
}

fn positive(v: f64, name: &str) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}
