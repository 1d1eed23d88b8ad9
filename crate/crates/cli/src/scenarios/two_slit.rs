//! Free two-slit marginal density, interference suppression at coarse
//! resolution, and the closed-form two-time kernel against the dense grid
//! operator.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqprob_core::freeform::{interference_period, interference_ratio, ralt_element, two_slit_density, FreeParams};
use seqprob_core::qcore::{free_hamiltonian, SampleSet};
use seqprob_core::report::{Assertion, Report};
use seqprob_core::seqmeas::{sequential_matrix, HistorySpec, PovmKind};

use crate::config::{Physics, Resolved, ScenarioConfig};
use crate::output::Table;
use crate::scenarios::grid_spec;
use crate::{CliError, ScenarioOutput};

const PAIRS: usize = 20;
// Sampled points stay within this distance of the origin.
const PAIR_RANGE: f64 = 6.0;

pub(super) fn defaults() -> ScenarioConfig {
    ScenarioConfig {
        physics: Physics {
            mass: Some(1.0),
            times: Some(vec![1.0, 5.0]),
            delta: Some(0.5),
            deltas: Some(vec![50.0]),
            sigma: Some(1.0),
            separation: Some(6.0),
        },
        grid: grid_spec(256, -32.0, 32.0),
        ..Default::default()
    }
}

pub(super) fn run(cfg: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let r = Resolved(cfg);
    let mass = r.mass()?;
    let times = r.times(2)?;
    let delta = r.delta()?;
    let (sigma, sep) = (r.sigma()?, r.separation()?);
    let grid = r.grid()?;
    let mut report = Report::new(&cfg.scenario);

    // Marginal density of the second reading after an unrecorded first one.
    let p = FreeParams::new(mass, times[0], delta)?.with_slits(sigma, sep)?;
    let mut density = Table::new("density", &["x", "density"]);
    for x in grid.points() {
        density.push(vec![x.into(), two_slit_density(x, &p)?.into()]);
    }
    let mut summary = Table::new("interference", &["time", "delta", "interference_ratio", "period"]);
    summary.push(vec![times[0].into(), delta.into(), interference_ratio(&p)?.into(), interference_period(&p)?.into()]);
    for d in r.deltas()? {
        let coarse = FreeParams::new(mass, times[1], d)?.with_slits(sigma, sep)?;
        let ratio = interference_ratio(&coarse)?;
        summary.push(vec![times[1].into(), d.into(), ratio.into(), interference_period(&coarse)?.into()]);
        report.push(Assertion::below("coarse_interference_ratio", ratio, 1e-3).with_input("delta", d));
    }

    // The periodic grid matches the continuum kernel while the lattice
    // velocity cutoff spreads it over at most one box length.
    let t_kernel = mass * grid.length() * grid.dx() / (2.0 * PI);
    let u1 = SampleSet::interval(-2.0, 2.0)?;
    let u2 = SampleSet::interval(-1.0, 1.0)?;
    let ham = free_hamiltonian(grid, mass)?;
    let hist = HistorySpec::new(vec![(0.0, u1.clone()), (t_kernel, u2.clone())])?;
    let m = sequential_matrix(&hist, &ham, &PovmKind::GaussianSqrt { delta })?;
    let kp = FreeParams::new(mass, t_kernel, delta)?;
    let lo = grid.cell_of(-PAIR_RANGE).unwrap_or(0);
    let hi = grid.cell_of(PAIR_RANGE).unwrap_or(grid.n_points() - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(Resolved(cfg).seed()?);
    let mut kernel = Table::new("kernel_check", &["x", "x_prime", "grid_re", "grid_im", "closed_re", "closed_im", "abs_diff"]);
    let mut worst = 0.0f64;
    for _ in 0..PAIRS {
        let (i, j) = (rng.random_range(lo..=hi), rng.random_range(lo..=hi));
        let g = m[(i, j)] / grid.dx();
        let c = ralt_element(grid.x(i), grid.x(j), &u1, &u2, &kp)?;
        let diff = (g - c).norm();
        worst = worst.max(diff);
        kernel.push(vec![
            grid.x(i).into(),
            grid.x(j).into(),
            g.re.into(),
            g.im.into(),
            c.re.into(),
            c.im.into(),
            diff.into(),
        ]);
    }
    report.push(Assertion::below("kernel_max_deviation", worst, 1e-4).with_input("time", t_kernel));
    Ok(ScenarioOutput { tables: vec![density, summary, kernel], report })
}
