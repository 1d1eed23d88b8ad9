//! The named experiments. Each scenario module supplies its defaults and a
//! `run` that takes a fully resolved configuration.

mod apparatus_check;
mod appendix_d;
mod bohm_compare;
mod compat_check;
mod delta_sweep;
mod freq_convergence;
mod frequency_operator;
mod hv_locality;
mod two_slit;

use serde::Serialize;

use seqprob_core::qcore::{Grid, WaveFunction};

use crate::config::{GridSpec, ScenarioConfig};
use crate::{CliError, ScenarioOutput};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// The part of the theory the scenario reproduces.
    pub topic: &'static str,
}

const CATALOG: [CatalogEntry; 9] = [
    CatalogEntry {
        name: "appendix-d",
        description: "half-line additivity ratio b/p++ against r, and the laboratory uncertainty budget",
        topic: "half-line box state",
    },
    CatalogEntry {
        name: "delta-sweep",
        description: "two-time probability at lattice resolutions delta and 2 delta with the interference split",
        topic: "resolution dependence",
    },
    CatalogEntry {
        name: "two-slit",
        description: "free two-slit marginal density and closed-form kernel against the dense grid operator",
        topic: "free-particle closed forms",
    },
    CatalogEntry {
        name: "compat-check",
        description: "POVM normalisation, last- and first-slot marginalisation, no-go witnesses",
        topic: "Kolmogorov compatibility",
    },
    CatalogEntry {
        name: "bohm-compare",
        description: "Bohmian equivariance and two-time probabilities against the quantum sequential POVM",
        topic: "Bohmian trajectories",
    },
    CatalogEntry {
        name: "hv-locality",
        description: "local hidden-variable factorisation and its failure without locality",
        topic: "hidden-variable models",
    },
    CatalogEntry {
        name: "freq-convergence",
        description: "relative-frequency decay of a Bernoulli control against a block-correlated resolution mixture",
        topic: "relative frequencies",
    },
    CatalogEntry {
        name: "apparatus-check",
        description: "two-pointer impulsive device: joint pointer statistics against the square-root POVM",
        topic: "measuring apparatus",
    },
    CatalogEntry {
        name: "frequency-operator",
        description: "frequency operators, sequential frequency POVM overlap and Stern-Gerlach marginals",
        topic: "frequency operators",
    },
];

pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG.to_vec()
}

pub const DEFAULT_SEED: u64 = 20_241_018;

pub fn defaults(name: &str) -> Option<ScenarioConfig> {
    let mut cfg = match name {
        "appendix-d" => appendix_d::defaults(),
        "delta-sweep" => delta_sweep::defaults(),
        "two-slit" => two_slit::defaults(),
        "compat-check" => compat_check::defaults(),
        "bohm-compare" => bohm_compare::defaults(),
        "hv-locality" => hv_locality::defaults(),
        "freq-convergence" => freq_convergence::defaults(),
        "apparatus-check" => apparatus_check::defaults(),
        "frequency-operator" => frequency_operator::defaults(),
        _ => return None,
    };
    cfg.scenario = name.to_string();
    cfg.seed.get_or_insert(DEFAULT_SEED);
    Some(cfg)
}

pub fn run(cfg: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    match cfg.scenario.as_str() {
        "appendix-d" => appendix_d::run(cfg),
        "delta-sweep" => delta_sweep::run(cfg),
        "two-slit" => two_slit::run(cfg),
        "compat-check" => compat_check::run(cfg),
        "bohm-compare" => bohm_compare::run(cfg),
        "hv-locality" => hv_locality::run(cfg),
        "freq-convergence" => freq_convergence::run(cfg),
        "apparatus-check" => apparatus_check::run(cfg),
        "frequency-operator" => frequency_operator::run(cfg),
        other => Err(CliError::Usage(format!("unknown scenario `{other}`"))),
    }
}

pub(crate) fn grid_spec(n_points: usize, x_min: f64, x_max: f64) -> Option<GridSpec> {
    Some(GridSpec { n_points, x_min, x_max })
}

/// Two-slit state for a positive separation, a centred Gaussian otherwise.
pub(crate) fn initial_state(grid: Grid, sigma: f64, separation: f64) -> Result<WaveFunction, CliError> {
    let psi = if separation > 0.0 {
        WaveFunction::two_slit(grid, sigma, separation)?
    } else {
        WaveFunction::gaussian(grid, 0.0, sigma, 0.0)?
    };
    let edge = psi.edge_mass(sigma);
    if edge > 1e-6 {
        eprintln!("warning: {edge:.2e} of the initial state lies within one sigma of the grid edge");
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_entry_has_defaults() {
        for e in catalog() {
            let d = defaults(e.name).unwrap();
            assert_eq!(d.scenario, e.name);
            assert!(d.seed.is_some());
        }
        assert!(defaults("nope").is_none());
    }
}
