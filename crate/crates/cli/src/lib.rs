//! Scenario runner for `seqprob`: configuration, the scenario catalog and
//! the files each run writes.

pub mod config;
pub mod output;
pub mod scenarios;

use std::path::Path;

use seqprob_core::report::Report;

pub use config::{Manifest, ScenarioConfig};
pub use output::{Cell, Format, Table};
pub use scenarios::{catalog, CatalogEntry};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] seqprob_core::Error),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit code: 2 for usage and configuration errors (including
    /// parameters the numerical routines reject), 1 for failures during a
    /// run.
    pub fn exit_code(&self) -> i32 {
        use seqprob_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Compute(
                E::StepFailure(_)
                | E::NearNode(_)
                | E::DegenerateBranch
                | E::IncompatibleOutcome(_)
                | E::NotHermitian(_)
                | E::NotAnEffect(_)
                | E::NonNormalizedKernel(_),
            ) => 1,
            CliError::Compute(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

/// Tables and assertions produced by one scenario.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub tables: Vec<Table>,
    pub report: Report,
}

/// Merges `user` with the scenario defaults. Unknown scenarios are a usage
/// error.
pub fn resolve(user: &ScenarioConfig) -> Result<ScenarioConfig, CliError> {
    let defaults = scenarios::defaults(&user.scenario).ok_or_else(|| {
        CliError::Usage(format!("unknown scenario `{}`; run with --list to see the catalog", user.scenario))
    })?;
    Ok(user.merged_with(&defaults))
}

/// Resolves and runs a scenario without writing anything.
pub fn run_scenario(user: &ScenarioConfig) -> Result<(ScenarioConfig, ScenarioOutput), CliError> {
    let cfg = resolve(user)?;
    let out = scenarios::run(&cfg)?;
    Ok((cfg, out))
}

/// Runs a scenario and writes its tables, `report.json` and `manifest.json`
/// into `dir`.
pub fn run_to_dir(
    user: &ScenarioConfig,
    dir: &Path,
    format: Format,
) -> Result<(Manifest, Report), CliError> {
    let (mut cfg, out) = run_scenario(user)?;
    // The output location is where a run lands, not part of the experiment.
    cfg.out = None;
    let manifest = output::write_run(dir, &cfg, &out, format)?;
    Ok((manifest, out.report))
}
