//! Frequency operators on `N` copies of a qubit, the frequency POVM built
//! from a two-time effect, and Stern–Gerlach conditional marginals.

use std::f64::consts::FRAC_PI_4;

use seqprob_core::freqlab::{
    condmarg_marginals, frequency_stats_combinatorial, frequency_stats_explicit, sequential_frequency_povm_overlap,
    stern_gerlach_projectors, two_time_effect,
};
use seqprob_core::report::{Assertion, Report};
use seqprob_core::{CMatrix, C64};

use crate::config::{Physics, Resolved, ScenarioConfig};
use crate::output::Table;
use crate::{CliError, ScenarioOutput};

const EXPLICIT_N: usize = 8;
const P_UP: f64 = 0.3;

pub(super) fn defaults() -> ScenarioConfig {
    ScenarioConfig {
        physics: Physics { times: Some(vec![FRAC_PI_4]), ..Default::default() },
        ..Default::default()
    }
}

fn m(v: [f64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &v.map(|x| C64::new(x, 0.0)))
}

pub(super) fn run(cfg: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let t = Resolved(cfg).times(1)?[0];
    let p_up = m([1.0, 0.0, 0.0, 0.0]);
    let p_down = m([0.0, 0.0, 0.0, 1.0]);
    let sigma_x = m([0.0, 1.0, 1.0, 0.0]);
    let sigma_z = m([1.0, 0.0, 0.0, -1.0]);
    let psi = [C64::new(P_UP.sqrt(), 0.0), C64::new(0.0, (1.0 - P_UP).sqrt())];
    let mut report = Report::new(&cfg.scenario);

    let comb = frequency_stats_combinatorial(EXPLICIT_N, &p_up, &psi)?;
    let expl = frequency_stats_explicit(EXPLICIT_N, &p_up, &psi)?;
    let mut stats = Table::new("frequency_stats", &["mode", "copies", "mean", "variance"]);
    stats.push(vec!["combinatorial".into(), EXPLICIT_N.into(), comb.mean.into(), comb.variance.into()]);
    stats.push(vec!["explicit".into(), EXPLICIT_N.into(), expl.mean.into(), expl.variance.into()]);
    let binomial_var = P_UP * (1.0 - P_UP) / EXPLICIT_N as f64;
    report.push(Assertion::near("combinatorial_mean", comb.mean, P_UP, 1e-14));
    report.push(Assertion::near("combinatorial_variance", comb.variance, binomial_var, 1e-14));
    let gap = (comb.mean - expl.mean).abs().max((comb.variance - expl.variance).abs());
    report.push(Assertion::below("explicit_vs_combinatorial", gap, 1e-12));

    let rabi = two_time_effect(&p_up, &p_down, &sigma_x, t);
    let commuting = two_time_effect(&p_up, &p_down, &sigma_z, t);
    let mut overlap = Table::new("povm_overlap", &["copies", "n", "n_prime", "rabi", "commuting"]);
    for copies in [4usize, 6, 8] {
        let (a, b) = (copies / 3, copies / 2);
        let o = sequential_frequency_povm_overlap(copies, &rabi, a, b)?;
        let c = sequential_frequency_povm_overlap(copies, &commuting, a, b)?;
        overlap.push(vec![copies.into(), a.into(), b.into(), o.into(), c.into()]);
        if copies == 6 {
            report.push(Assertion::above("rabi_overlap", o, 1e-2).with_input("copies", 6.0));
            report.push(Assertion::below("commuting_overlap", c, 1e-10).with_input("copies", 6.0));
        }
    }

    let (x, z) = stern_gerlach_projectors();
    let cm = condmarg_marginals(&z[0], &x, &z, &CMatrix::zeros(2, 2), 0.0)?;
    let mut marg = Table::new("condmarg", &["outcome", "standard", "hypothesis"]);
    for (j, name) in ["z_up", "z_down"].iter().enumerate() {
        marg.push(vec![(*name).into(), cm.standard[j].into(), cm.hypothesis[j].into()]);
    }
    report.push(Assertion::holds("condmarg_standard_is_half_half", cm.standard == [0.5, 0.5]));
    report.push(Assertion::holds("condmarg_hypothesis_is_one_zero", cm.hypothesis == [1.0, 0.0]));
    Ok(ScenarioOutput { tables: vec![stats, overlap, marg], report })
}
