//! Two Gaussian pointers coupled impulsively at `t₁` and `t₂`: joint
//! pointer statistics against `Tr(ρ R^δ)` for the square-root POVM.

use seqprob_core::apparatus::{
    impulsive_total_state, resolution_from_device, single_pointer_distribution, ApparatusState, CouplingSpec,
    DeviceState,
};
use seqprob_core::qcore::{free_hamiltonian, SampleSet, WaveFunction};
use seqprob_core::report::{Assertion, Report};
use seqprob_core::seqmeas::{povm_probability, HistorySpec, PovmKind};

use crate::config::{Physics, Resolved, ScenarioConfig};
use crate::output::Table;
use crate::scenarios::grid_spec;
use crate::{CliError, ScenarioOutput};

const NODES: usize = 63;
const X0: f64 = -1.0;
const K0: f64 = 1.0;

pub(super) fn defaults() -> ScenarioConfig {
    ScenarioConfig {
        physics: Physics {
            mass: Some(1.0),
            times: Some(vec![0.3, 1.0]),
            delta: None,
            deltas: Some(vec![0.5, 0.75]),
            sigma: Some(1.0),
            separation: None,
        },
        grid: grid_spec(128, -8.0, 8.0),
        ..Default::default()
    }
}

fn sets() -> Vec<(&'static str, SampleSet)> {
    vec![
        ("x<-1", SampleSet::below(-1.0)),
        ("-1<=x<1", SampleSet::interval(-1.0, 1.0).expect("valid interval")),
        ("x>=1", SampleSet::above(1.0)),
    ]
}

pub(super) fn run(cfg: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let r = Resolved(cfg);
    let grid = r.grid()?;
    let t = r.times(2)?;
    let psi = WaveFunction::gaussian(grid, X0, r.sigma()?, K0)?;
    let ham = free_hamiltonian(grid, r.mass()?)?;
    let rho = psi.density_operator();
    let labelled = sets();
    let only: Vec<SampleSet> = labelled.iter().map(|(_, s)| s.clone()).collect();
    let mut report = Report::new(&cfg.scenario);
    let mut joint = Table::new("joint", &["delta", "first", "second", "pointer", "povm", "abs_diff"]);
    let mut devices = Table::new("devices", &["delta", "fitted_delta", "residual", "truncation_error", "k_norm"]);

    let (mut worst, mut worst_norm, mut worst_fit, mut worst_marg) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for delta in r.deltas()? {
        let device = DeviceState::gaussian(delta, NODES)?;
        let fit = resolution_from_device(&device);
        let app = ApparatusState { system: psi.clone(), device };
        let state = impulsive_total_state(&app, &ham, CouplingSpec { t1: t[0], t2: t[1] })?;
        let k_norm = state.k_norm()?;
        worst_norm = worst_norm.max((k_norm - 1.0).abs());
        worst_fit = worst_fit.max(fit.residual);
        devices.push(vec![delta.into(), fit.delta.into(), fit.residual.into(), fit.truncation_error.into(), k_norm.into()]);

        let table = state.joint_table(&only, &only)?;
        for (i, (l1, u1)) in labelled.iter().enumerate() {
            for (j, (l2, u2)) in labelled.iter().enumerate() {
                let h = HistorySpec::new(vec![(t[0], u1.clone()), (t[1], u2.clone())])?;
                let p = povm_probability(&rho, &h, &ham, &PovmKind::GaussianSqrt { delta })?;
                let d = (table[i][j] - p).abs();
                worst = worst.max(d);
                joint.push(vec![delta.into(), (*l1).into(), (*l2).into(), table[i][j].into(), p.into(), d.into()]);
            }
            let row: f64 = table[i].iter().sum();
            let single = single_pointer_distribution(&app, &ham, t[0], u1)?;
            worst_marg = worst_marg.max((row - single).abs());
        }
    }
    report.push(Assertion::below("pointer_vs_povm", worst, 1e-4));
    report.push(Assertion::below("composite_norm_deviation", worst_norm, 1e-6));
    report.push(Assertion::below("device_fit_residual", worst_fit, 0.05));
    report.push(Assertion::below("first_pointer_marginal", worst_marg, 1e-6));
    Ok(ScenarioOutput { tables: vec![joint, devices], report })
}
