//! Half-line box state: `p₊₊`, `b` and `b/p₊₊` along `r`, plus the SI
//! uncertainty budget.

use seqprob_core::freeform::{
    appendix_d_quantities, box_state_two_time, log_spaced, ratio_curve, uncertainty_budget, NEUTRON_MASS,
};
use seqprob_core::report::{Assertion, Report};

use crate::config::{Resolved, ScenarioConfig, Sweep};
use crate::output::Table;
use crate::{CliError, ScenarioOutput};

// Laboratory scales of the budget, SI.
const SLIT_L: f64 = 1e-2;
const TRACE_D: f64 = 1e-4;
const BEAM_V: f64 = 1e4;
const TIME_ERR_TARGET: f64 = 1e-4;
// Stand-in for r → 0⁺.
const R_SMALL: f64 = 1e-10;

pub(super) fn defaults() -> ScenarioConfig {
    ScenarioConfig { sweep: Some(Sweep { lo: 0.01, hi: 100.0, points: 61 }), ..Default::default() }
}

pub(super) fn run(cfg: &ScenarioConfig) -> Result<ScenarioOutput, CliError> {
    let sweep = Resolved(cfg).sweep()?;
    let rs = log_spaced(sweep.lo, sweep.hi, sweep.points);
    let curve = ratio_curve(&rs)?;

    let mut table = Table::new("ratio_curve", &["r", "p_pp", "b", "ratio", "p_pp_direct", "b_direct"]);
    for i in 0..curve.len() {
        let (p, b) = box_state_two_time(curve.r_values[i])?;
        table.push(vec![
            curve.r_values[i].into(),
            curve.p_pp[i].into(),
            curve.b[i].into(),
            curve.ratio[i].into(),
            p.into(),
            b.into(),
        ]);
    }

    let mut report = Report::new(&cfg.scenario);
    let small = appendix_d_quantities(0.01)?;
    report.push(Assertion::below("ratio_at_r_0.01", small.ratio, 0.05));
    let upto_one: Vec<f64> = log_spaced(0.01, 1.0, 41)
        .into_iter()
        .map(|r| appendix_d_quantities(r).map(|q| q.ratio))
        .collect::<Result<_, _>>()?;
    let monotone = upto_one.windows(2).all(|w| w[1] > w[0]);
    report.push(Assertion::holds("ratio_monotone_on_0.01_1", monotone));
    let ten = appendix_d_quantities(10.0)?;
    report.push(Assertion::near("ratio_at_r_10", ten.ratio, 0.5, 0.05));
    let zero = appendix_d_quantities(R_SMALL)?;
    report.push(Assertion::near("p_pp_at_r_0", zero.p_pp, 0.5, 1e-4).with_input("r", R_SMALL));

    let budget = uncertainty_budget(SLIT_L, TRACE_D, BEAM_V, NEUTRON_MASS)?;
    let mut bt = Table::new("budget", &["quantity", "value"]);
    for (k, v) in [
        ("L_m", SLIT_L),
        ("d_m", TRACE_D),
        ("v_z_m_per_s", BEAM_V),
        ("mass_kg", NEUTRON_MASS),
        ("pos_err", budget.pos_err),
        ("time_err", budget.time_err),
    ] {
        bt.push(vec![k.into(), v.into()]);
    }
    report.push(Assertion::near("budget_pos_err", budget.pos_err, 1e-2, 1e-15));
    report.push(
        Assertion::near("budget_time_err_decades", (budget.time_err / TIME_ERR_TARGET).log10(), 0.0, 1.0)
            .with_input("time_err", budget.time_err),
    );
    Ok(ScenarioOutput { tables: vec![table, bt], report })
}
