//! Classical comparators: Markov path measures, Bohmian trajectories and
//! local hidden-variable models. All of them are genuine path measures, so
//! they satisfy compatibility at every slot.

mod bohm;
mod hv;
mod markov;

pub use bohm::{
    bohm_multitime_probability, bohm_trajectories, bohm_velocity, chi_square_p_value, derivative,
    ks_statistic, BohmEnsemble, BohmSettings, EnsembleSummary, GridSampler, McEstimate,
    KS_CRITICAL_001, MAX_RETRIES, NODE_THRESHOLD,
};
pub use hv::{
    hv_two_time_unchecked, local_hv_two_time, system_only_two_time, unsharp_hv_check,
    GridDensity, HvDynamics, LocalHvModel, UnsharpReport,
};
pub use markov::{markov_path_probability, MarkovKernel};
