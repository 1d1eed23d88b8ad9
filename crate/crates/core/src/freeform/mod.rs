//! Closed-form free-particle results and one-dimensional quadratures.

mod appendix_d;
mod budget;
mod params;
mod r2free;
pub mod special;
mod time_avg;
mod two_slit;

pub use appendix_d::{
    appendix_d_quantities, box_state_two_time, log_spaced, ratio_curve, AppendixD, RatioCurve,
};
pub use budget::{uncertainty_budget, UncertaintyBudget, HBAR, NEUTRON_MASS};
pub use params::FreeParams;
pub use r2free::{indicator_transform, r2free_element, ralt_element};
pub use special::{fresnel, sine_integral};
pub use time_avg::{time_averaged_projector, TimeAveragedProjector, TIME_NODES};
pub use two_slit::{
    density_peaks, interference_period, interference_ratio, two_slit_density, two_slit_marginal,
};
