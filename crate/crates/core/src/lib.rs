//! Numerical laboratory for the probability structures of sequential quantum
//! measurements.
//!
//! The crate is organised by subsystem:
//!
//! * [`qcore`]: a discretised 1-D Hilbert space: grids, states, operators,
//!   unitary evolution, Lüders reduction and smeared indicator functions.
//! * [`seqmeas`]: histories, class operators, the decoherence functional,
//!   sequential POVMs (sharp lattice cells, Gaussian square-root effects,
//!   discrete spectral projectors) and the no-go witnesses.
//! * [`freeform`]: closed-form free-particle results, the sine integral, the
//!   half-line additivity curve, the two-slit marginal, time-averaged
//!   projectors and the laboratory uncertainty budget.
//! * [`classical`]: Markov path measures, Bohmian trajectories and local
//!   hidden-variable models.
//! * [`freqlab`]: relative-frequency traces, sequential samplers, the
//!   non-convergence estimator and frequency operators.
//! * [`apparatus`]: the two-pointer impulsive measuring-device model.
//!
//! Units are natural (ħ = 1) throughout, except in
//! [`freeform::uncertainty_budget`] which takes SI inputs.

pub mod apparatus;
pub mod classical;
mod error;
pub mod fourier;
pub mod freeform;
pub mod freqlab;
pub mod linalg;
pub mod qcore;
pub mod quad;
pub mod report;
pub mod seqmeas;

pub use error::{Error, Result};

/// Complex scalar used for amplitudes and operator entries.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Construction-time invariant tolerance.
pub const INVARIANT_TOL: f64 = 1e-9;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
