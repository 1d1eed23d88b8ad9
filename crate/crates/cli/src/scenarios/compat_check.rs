//! Normalisation of the sequential POVM, the last-slot/first-slot
//! compatibility split and the no-go witnesses.

use seqprob_core::qcore::{free_hamiltonian, potential_hamiltonian, Grid, SampleSet};
use seqprob_core::report::{Assertion, Report};
use seqprob_core::seqmeas::{compatibility_check, nogo_witness, povm_probability, sequential_matrix, HistorySpec, PovmKind};

use crate::config::{Physics, Resolved, ScenarioConfig};
use crate::output::Table;
use crate::scenarios::{grid_spec, initial_state};
use crate::{CliError, ScenarioOutput};

const NORM_TIMES: [f64; 3] = [0.3, 0.8, 1.5];

pub(super) fn defaults() -> ScenarioConfig {
    ScenarioConfig {
        physics: Physics {
            mass: Some(1.0),
            times: Some(vec![0.0, 1.0]),
            delta: Some(0.25),
            deltas: None,
            sigma: Some(1.0),
            separation: Some(6.0),
        },
        grid: grid_spec(256, -16.0, 16.0),
        ..Default::default()
    }
}

pub(super) fn run(cfg: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let r = Resolved(cfg);
    let grid = r.grid()?;
    let mass = r.mass()?;
    let t = r.times(2)?;
    let delta = r.delta()?;
    let kind = PovmKind::GaussianSqrt { delta };
    let mut report = Report::new(&cfg.scenario);

    // R(Ω, …, Ω) = I on a 128-point grid.
    let small = Grid::new(128, -8.0, 8.0)?;
    let small_ham = free_hamiltonian(small, mass)?;
    let mut norm = Table::new("normalization", &["slots", "max_abs_deviation"]);
    let mut worst = 0.0f64;
    for n in 1..=NORM_TIMES.len() {
        let h = HistorySpec::new(NORM_TIMES[..n].iter().map(|&s| (s, SampleSet::full())).collect())?;
        let m = sequential_matrix(&h, &small_ham, &kind)?;
        let dev = (m - seqprob_core::linalg::identity(small.n_points())).camax();
        worst = worst.max(dev);
        norm.push(vec![n.into(), dev.into()]);
    }
    report.push(Assertion::below("povm_normalization", worst, 1e-6));

    // Marginalising the last slot against the first.
    let psi = initial_state(grid, r.sigma()?, r.separation()?)?;
    let rho = psi.density_operator();
    let ham = free_hamiltonian(grid, mass)?;
    let hist = HistorySpec::new(vec![(t[0], SampleSet::above(0.0)), (t[1], SampleSet::above(1.0))])?;
    let p = povm_probability(&rho, &hist, &ham, &kind)?;
    let mut split = Table::new("compatibility", &["slot", "sum_over_slot", "reduced_history", "defect"]);
    let mut defects = [0.0; 2];
    for slot in 0..2 {
        let c = compatibility_check(&rho, &hist, slot, &ham, &kind)?;
        defects[slot] = c.defect;
        split.push(vec![slot.into(), c.lhs.into(), c.rhs.into(), c.defect.into()]);
    }
    report.push(Assertion::below("last_slot_defect", defects[1], 1e-6));
    report.push(Assertion::above("first_slot_defect_over_p", defects[0] / p, 0.01).with_input("p", p));

    // No-go witnesses: free particle, then a commuting (pure potential) control.
    let free_grid = Grid::new(128, -3.2, 3.2)?;
    let u = SampleSet::above(0.0);
    let free = nogo_witness(&free_hamiltonian(free_grid, mass)?, 0.0, &u, 1.0, &u, 0.1)?;
    let ctrl_grid = Grid::new(64, -8.0, 8.0)?;
    let ctrl_ham = potential_hamiltonian(ctrl_grid, |x| 0.3 * x * x);
    let ctrl = nogo_witness(&ctrl_ham, 0.0, &u, 1.0, &u, 0.5)?;
    let mut nogo = Table::new("nogo", &["case", "commutator_norm", "marginal_idempotency_defect", "marginal_deviation"]);
    for (name, w) in [("free", free), ("commuting", ctrl)] {
        nogo.push(vec![
            name.into(),
            w.commutator_norm.into(),
            w.marginal_idempotency_defect.into(),
            w.marginal_deviation.into(),
        ]);
    }
    report.push(Assertion::above("free_commutator_norm", free.commutator_norm, 0.1));
    report.push(Assertion::above("free_marginal_idempotency_defect", free.marginal_idempotency_defect, 0.01));
    report.push(Assertion::below("commuting_commutator_norm", ctrl.commutator_norm, 1e-9));
    report.push(Assertion::below("commuting_marginal_idempotency_defect", ctrl.marginal_idempotency_defect, 1e-9));
    Ok(ScenarioOutput { tables: vec![norm, split, nogo], report })
}
