//! Relative frequencies of a sequential record under a block-correlated
//! mixture of resolutions, against an i.i.d. Bernoulli control.

use seqprob_core::freeform::log_spaced;
use seqprob_core::freqlab::{
    bernoulli_trace, default_burn, log_log_slope, mixture_ensemble_trace, nonconvergence_measure, DeltaPolicy,
    EnsembleSpec,
};
use seqprob_core::qcore::{free_hamiltonian, SampleSet};
use seqprob_core::report::{Assertion, Report};
use seqprob_core::seqmeas::HistorySpec;

use crate::config::{EnsembleParams, Physics, Resolved, ScenarioConfig};
use crate::output::Table;
use crate::scenarios::{grid_spec, initial_state};
use crate::{CliError, ScenarioOutput};

const REPS: usize = 40;
const DECAY_POINTS: usize = 9;

pub(super) fn defaults() -> ScenarioConfig {
    ScenarioConfig {
        physics: Physics {
            mass: Some(1.0),
            times: Some(vec![0.0, 0.5]),
            delta: None,
            deltas: Some(vec![0.05, 0.2]),
            sigma: Some(1.0),
            separation: Some(0.0),
        },
        grid: grid_spec(1024, -12.8, 12.8),
        ensemble: EnsembleParams { n_samples: Some(100_000), block_len: Some(1000) },
        ..Default::default()
    }
}

pub(super) fn run(cfg: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let r = Resolved(cfg);
    let grid = r.grid()?;
    let t = r.times(2)?;
    let deltas = r.deltas()?;
    let n = r.n_samples()?;
    let seed = r.seed()?;
    let psi = initial_state(grid, r.sigma()?, r.separation()?)?;
    let ham = free_hamiltonian(grid, r.mass()?)?;
    if n < 4 {
        return Err(CliError::Config("ensemble.n_samples must be at least 4".into()));
    }

    let history = HistorySpec::new(vec![(t[0], SampleSet::full()), (t[1], SampleSet::interval(-1.0, 1.0)?)])?;
    let weights = vec![1.0; deltas.len()];
    let spec = EnsembleSpec {
        n_runs: n,
        seed,
        history,
        policy: DeltaPolicy::Mixture { values: deltas, weights, block_len: r.block_len()? },
    };
    let mixture = mixture_ensemble_trace(&spec, &psi, &ham)?;
    let p = mixture.last();
    let control = bernoulli_trace(p, n, seed)?;
    let burn = default_burn(n);
    let eps_mix = nonconvergence_measure(&mixture, burn)?;
    let eps_ctrl = nonconvergence_measure(&control, burn)?;

    let mut report = Report::new(&cfg.scenario);
    report.push(
        Assertion::above("mixture_over_control", eps_mix / eps_ctrl, 3.0)
            .with_input("eps_mixture", eps_mix)
            .with_input("eps_control", eps_ctrl),
    );

    // Mean ε̂ of independent controls at growing n.
    let lo = (n / 100).max(4) as f64;
    let ns: Vec<usize> = log_spaced(lo, n as f64, DECAY_POINTS).iter().map(|v| v.round() as usize).collect();
    let controls: Vec<_> =
        (0..REPS).map(|k| bernoulli_trace(p, n, seed.wrapping_add(1 + k as u64))).collect::<Result<_, _>>()?;
    let mut decay = Table::new("control_decay", &["n", "mean_eps"]);
    let mut means = Vec::with_capacity(ns.len());
    for &m in &ns {
        let mut acc = 0.0;
        for c in &controls {
            acc += nonconvergence_measure(&c.truncated(m), default_burn(m))?;
        }
        let mean = acc / REPS as f64;
        means.push(mean);
        decay.push(vec![m.into(), mean.into()]);
    }
    let xs: Vec<f64> = ns.iter().map(|&v| v as f64).collect();
    let slope = log_log_slope(&xs, &means);
    report.push(Assertion::near("control_log_log_slope", slope, -0.5, 0.1));

    let mut traces = Table::new("traces", &["n", "nu_mixture", "nu_control"]);
    for i in 0..n {
        traces.push(vec![(i + 1).into(), mixture.nu[i].into(), control.nu[i].into()]);
    }
    Ok(ScenarioOutput { tables: vec![traces, decay], report })
}
