//! Bohmian trajectories on the two-slit state: equivariance at each
//! checkpoint, and two-time statistics against the quantum sequential POVM.

use seqprob_core::classical::{bohm_multitime_probability, bohm_trajectories, BohmSettings};
use seqprob_core::qcore::{evolve, free_hamiltonian, SampleSet};
use seqprob_core::report::{Assertion, Report};
use seqprob_core::seqmeas::{povm_probability, HistorySpec, PovmKind};

use crate::config::{EnsembleParams, Physics, Resolved, ScenarioConfig};
use crate::output::Table;
use crate::scenarios::{grid_spec, initial_state};
use crate::{CliError, ScenarioOutput};

const BINS: usize = 20;

pub(super) fn defaults() -> ScenarioConfig {
    ScenarioConfig {
        physics: Physics {
            mass: Some(1.0),
            times: Some(vec![0.5, 1.0, 2.0]),
            delta: Some(0.25),
            deltas: None,
            sigma: Some(0.7),
            separation: Some(3.0),
        },
        grid: grid_spec(256, -16.0, 16.0),
        ensemble: EnsembleParams { n_samples: Some(10_000), block_len: None },
        ..Default::default()
    }
}

pub(super) fn run(cfg: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let r = Resolved(cfg);
    let grid = r.grid()?;
    let mass = r.mass()?;
    let times = r.times(3)?;
    let delta = r.delta()?;
    let psi = initial_state(grid, r.sigma()?, r.separation()?)?;
    let ham = free_hamiltonian(grid, mass)?;
    let ens = bohm_trajectories(&psi, &ham, mass, &times, r.n_samples()?, r.seed()?, BohmSettings::default())?;
    let mut report = Report::new(&cfg.scenario);

    let window = SampleSet::interval(0.5, 2.0)?;
    let mut checkpoints =
        Table::new("checkpoints", &["time", "chi2_p_value", "bohm_in_window", "std_err", "born_in_window"]);
    for (k, &t) in times.iter().enumerate() {
        let pv = ens.equivariance_p_value(&ham, k, BINS)?;
        report.push(Assertion::above("equivariance_p_value", pv, 0.01).with_input("time", t));
        let bohm = bohm_multitime_probability(&ens, &HistorySpec::new(vec![(t, window.clone())])?)?;
        let born = evolve(&psi, &ham, t)?.probability_of_set(&window);
        report.push(
            Assertion::near("single_time_born_over_se", (bohm.value - born) / bohm.std_err, 0.0, 3.0)
                .with_input("time", t),
        );
        checkpoints.push(vec![t.into(), pv.into(), bohm.value.into(), bohm.std_err.into(), born.into()]);
    }

    // Two-time probability of x > 0 at the first two checkpoints.
    let right = SampleSet::above(0.0);
    let two = HistorySpec::new(vec![(times[0], right.clone()), (times[1], right.clone())])?;
    let bohm = bohm_multitime_probability(&ens, &two)?;
    let quantum = povm_probability(&psi.density_operator(), &two, &ham, &PovmKind::GaussianSqrt { delta })?;
    let mut two_time = Table::new("two_time", &["quantity", "value", "std_err"]);
    two_time.push(vec!["bohm".into(), bohm.value.into(), bohm.std_err.into()]);
    two_time.push(vec!["quantum_povm".into(), quantum.into(), 0.0.into()]);
    report.push(
        Assertion::above("bohm_vs_quantum_over_se", (bohm.value - quantum).abs() / bohm.std_err, 5.0)
            .with_input("bohm", bohm.value)
            .with_input("quantum", quantum),
    );

    // Interior-slot marginalisation of a three-time history.
    let mid = SampleSet::interval(-1.0, 1.0)?;
    let full = HistorySpec::new(vec![(times[0], right.clone()), (times[1], mid.clone()), (times[2], right.clone())])?;
    let a = bohm_multitime_probability(&ens, &full)?;
    let b = bohm_multitime_probability(&ens, &full.with_set(1, mid.complement())?)?;
    let c = bohm_multitime_probability(&ens, &full.without_slot(1)?)?;
    let se = c.std_err.max(1.0 / ens.len().max(1) as f64);
    report.push(Assertion::near("interior_slot_defect_over_se", (a.value + b.value - c.value) / se, 0.0, 3.0));
    two_time.push(vec!["interior_slot_sum".into(), (a.value + b.value).into(), se.into()]);
    two_time.push(vec!["interior_slot_removed".into(), c.value.into(), c.std_err.into()]);

    let mut traj = Table::new("trajectories", &["index", "x0", "time", "x"]);
    for (j, (x0, tr)) in ens.initial_points.iter().zip(&ens.trajectories).enumerate() {
        for (t, x) in times.iter().zip(tr) {
            traj.push(vec![j.into(), (*x0).into(), (*t).into(), (*x).into()]);
        }
    }
    report.push(Assertion::below("discarded_fraction", ens.discarded as f64 / r.n_samples()? as f64, 0.01));
    Ok(ScenarioOutput { tables: vec![checkpoints, two_time, traj], report })
}
