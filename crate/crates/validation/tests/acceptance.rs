//! Acceptance gate: runs each scenario with its default configuration and
//! prints one PASS/FAIL line per criterion. Exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use seqprob_cli::{run_scenario, ScenarioConfig};
use seqprob_core::report::Report;

struct Criterion {
    label: &'static str,
    scenario: &'static str,
    assertions: &'static [&'static str],
    limit_s: f64,
}

const CRITERIA: [Criterion; 14] = [
    Criterion {
        label: "half-line ratio curve",
        scenario: "appendix-d",
        assertions: &["ratio_at_r_0.01", "ratio_monotone_on_0.01_1", "ratio_at_r_10"],
        limit_s: 5.0,
    },
    Criterion { label: "p++ at r -> 0", scenario: "appendix-d", assertions: &["p_pp_at_r_0"], limit_s: 1.0 },
    Criterion { label: "POVM normalization", scenario: "compat-check", assertions: &["povm_normalization"], limit_s: 30.0 },
    Criterion {
        label: "compatibility split",
        scenario: "compat-check",
        assertions: &["last_slot_defect", "first_slot_defect_over_p"],
        limit_s: 30.0,
    },
    Criterion {
        label: "delta sensitivity",
        scenario: "delta-sweep",
        assertions: &["relative_sensitivity", "interference_identity_gap"],
        limit_s: 60.0,
    },
    Criterion {
        label: "no-go witnesses",
        scenario: "compat-check",
        assertions: &[
            "free_commutator_norm",
            "free_marginal_idempotency_defect",
            "commuting_commutator_norm",
            "commuting_marginal_idempotency_defect",
        ],
        limit_s: 30.0,
    },
    Criterion { label: "closed form vs grid", scenario: "two-slit", assertions: &["kernel_max_deviation"], limit_s: 60.0 },
    Criterion {
        label: "apparatus identification",
        scenario: "apparatus-check",
        assertions: &["pointer_vs_povm"],
        limit_s: 120.0,
    },
    Criterion {
        label: "Bohm equivariance and divergence",
        scenario: "bohm-compare",
        assertions: &["equivariance_p_value", "bohm_vs_quantum_over_se", "interior_slot_defect_over_se"],
        limit_s: 600.0,
    },
    Criterion {
        label: "local HV factorization",
        scenario: "hv-locality",
        assertions: &["kicked_map_gap", "markov_gap_over_se", "non_local_gap"],
        limit_s: 300.0,
    },
    Criterion {
        label: "frequency operators",
        scenario: "frequency-operator",
        assertions: &[
            "combinatorial_mean",
            "combinatorial_variance",
            "explicit_vs_combinatorial",
            "rabi_overlap",
            "commuting_overlap",
        ],
        limit_s: 60.0,
    },
    Criterion {
        label: "condmarg distinction",
        scenario: "frequency-operator",
        assertions: &["condmarg_standard_is_half_half", "condmarg_hypothesis_is_one_zero"],
        limit_s: 1.0,
    },
    Criterion {
        label: "uncertainty budget",
        scenario: "appendix-d",
        assertions: &["budget_pos_err", "budget_time_err_decades"],
        limit_s: 1.0,
    },
    Criterion {
        label: "frequency convergence",
        scenario: "freq-convergence",
        assertions: &["control_log_log_slope", "mixture_over_control"],
        limit_s: 300.0,
    },
];

fn main() -> ExitCode {
    let mut runs: BTreeMap<&str, Result<(Report, f64), String>> = BTreeMap::new();
    for c in &CRITERIA {
        runs.entry(c.scenario).or_insert_with(|| {
            let start = Instant::now();
            run_scenario(&ScenarioConfig::named(c.scenario))
                .map(|(_, out)| (out.report, start.elapsed().as_secs_f64()))
                .map_err(|e| e.to_string())
        });
    }
    let mut failed = 0;
    for (i, c) in CRITERIA.iter().enumerate() {
        let (ok, detail) = match &runs[c.scenario] {
            Err(e) => (false, format!("error: {e}")),
            Ok((report, secs)) => {
                let mut ok = *secs < c.limit_s;
                let mut parts = vec![format!("{secs:.2}s/{:.0}s", c.limit_s)];
                for name in c.assertions {
                    let hits: Vec<_> = report.assertions.iter().filter(|a| a.name == *name).collect();
                    if hits.is_empty() {
                        ok = false;
                        parts.push(format!("{name}=missing"));
                    }
                    for a in hits {
                        ok &= a.pass;
                        parts.push(format!("{name}={:.4e}{}", a.value, if a.pass { "" } else { "(fail)" }));
                    }
                }
                (ok, parts.join(" "))
            }
        };
        if !ok {
            failed += 1;
        }
        println!("{} {:>2} {:<34} [{}] {}", if ok { "PASS" } else { "FAIL" }, i + 1, c.label, c.scenario, detail);
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
