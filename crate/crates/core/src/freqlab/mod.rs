//! Relative frequencies of sequential outcomes: traces, the non-convergence
//! estimator, sequential samplers, resolution-mixture ensembles, frequency
//! operators and the second-measurement marginal comparison.
//!
//! The mixture ensembles are a hypothesis simulator for runs whose
//! resolution is not stable; they are not a standard quantum prediction.

mod condmarg;
mod freq_op;
mod ratio;
mod sampler;
mod trace;

pub use condmarg::{condmarg_distinction, condmarg_marginals, stern_gerlach_projectors, ConditionalMarginals};
pub use freq_op::{
    frequency_observable, frequency_operator, frequency_pvm, frequency_stats_combinatorial,
    frequency_stats_explicit, sequential_frequency_povm_overlap, two_time_effect, FrequencyStats,
    EXPLICIT_CAP,
};
pub use ratio::decoherence_ratio;
pub use sampler::{
    mixture_ensemble_trace, run_ensemble, sample_sequential_run, DeltaPolicy, EnsembleSpec,
};
pub use trace::{
    bernoulli_trace, default_burn, frequency_trace, log_log_slope, nonconvergence_measure,
    FrequencyTrace,
};
