//! Local hidden-variable models reproduce the system-only two-time law;
//! dropping locality breaks it.

use seqprob_core::classical::{
    hv_two_time_unchecked, local_hv_two_time, system_only_two_time, GridDensity, HvDynamics, LocalHvModel,
};
use seqprob_core::qcore::SampleSet;
use seqprob_core::report::{Assertion, Report};

use crate::config::{EnsembleParams, Physics, Resolved, ScenarioConfig};
use crate::output::Table;
use crate::scenarios::{grid_spec, initial_state};
use crate::{CliError, ScenarioOutput};

const KICKS: [f64; 3] = [0.0, 0.37, 1.0];
const SPREAD_TIME: f64 = 1.0;
const DRIFT: f64 = 0.3;
const DIFFUSION: f64 = 0.5;
const JUMP: f64 = 1.5;

pub(super) fn defaults() -> ScenarioConfig {
    ScenarioConfig {
        physics: Physics {
            mass: None,
            times: Some(vec![0.5, 1.5]),
            delta: None,
            deltas: None,
            sigma: Some(0.7),
            separation: Some(3.0),
        },
        grid: grid_spec(256, -16.0, 16.0),
        ensemble: EnsembleParams { n_samples: Some(100_000), block_len: None },
        ..Default::default()
    }
}

pub(super) fn run(cfg: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let r = Resolved(cfg);
    let grid = r.grid()?;
    let t = r.times(2)?;
    let times = (t[0], t[1]);
    let rho = initial_state(grid, r.sigma()?, r.separation()?)?.position_density();
    let density = || GridDensity { grid: &grid, values: &rho };
    let u1 = SampleSet::above(0.0);
    let u2 = SampleSet::interval(-1.0, 2.5)?;
    let mut report = Report::new(&cfg.scenario);
    let mut table = Table::new("factorization", &["model", "kick", "local", "model_value", "system_only", "gap", "std_err"]);

    let mut worst = 0.0f64;
    for kick in KICKS {
        let dynamics = HvDynamics::KickedMap { spread_time: SPREAD_TIME, drift: DRIFT, kick };
        let model = LocalHvModel::new(dynamics)?;
        let lhs = local_hv_two_time(&model, density(), (&u1, &u2), times)?.value;
        let rhs = system_only_two_time(&dynamics, density(), (&u1, &u2), times)?.value;
        worst = worst.max((lhs - rhs).abs());
        table.push(vec!["kicked_map".into(), kick.into(), "true".into(), lhs.into(), rhs.into(), (lhs - rhs).abs().into(), 0.0.into()]);
    }
    report.push(Assertion::below("kicked_map_gap", worst, 1e-10));

    let dynamics = HvDynamics::KickedMap { spread_time: SPREAD_TIME, drift: DRIFT, kick: 1.0 };
    let right = SampleSet::above(0.5);
    let broken = hv_two_time_unchecked(&LocalHvModel::new(dynamics)?.non_local(), density(), (&u1, &right), times)?.value;
    let rhs = system_only_two_time(&dynamics, density(), (&u1, &right), times)?.value;
    table.push(vec!["kicked_map".into(), 1.0.into(), "false".into(), broken.into(), rhs.into(), (broken - rhs).abs().into(), 0.0.into()]);
    report.push(Assertion::above("non_local_gap", (broken - rhs).abs(), 1e-2));

    let samples = r.n_samples()?;
    let dynamics = HvDynamics::MarkovJump { diffusion: DIFFUSION, kick: JUMP, samples, seed: r.seed()? };
    let half = SampleSet::above(0.0);
    let lhs = local_hv_two_time(&LocalHvModel::new(dynamics)?, density(), (&half, &half), times)?;
    let rhs = system_only_two_time(&dynamics, density(), (&half, &half), times)?;
    let se = (lhs.std_err.powi(2) + rhs.std_err.powi(2)).sqrt();
    table.push(vec![
        "markov_jump".into(),
        JUMP.into(),
        "true".into(),
        lhs.value.into(),
        rhs.value.into(),
        (lhs.value - rhs.value).abs().into(),
        se.into(),
    ]);
    report.push(
        Assertion::near("markov_gap_over_se", (lhs.value - rhs.value) / se, 0.0, 3.0).with_input("samples", samples as f64),
    );
    Ok(ScenarioOutput { tables: vec![table], report })
}
