//! Discretised one-dimensional Hilbert space.
//!
//! Positions live on a periodic grid of cell-centred points
//! `x_i = x_min + (i + ½)·dx`. Operators are stored as matrices acting on
//! amplitude vectors, so the continuum kernel of a matrix `M` is `M_ij / dx`.
//! A density operator stores kernel values `ρ(x_i, x_j)`, which makes
//! `dx·Tr ρ = 1` and probabilities `dx·Tr(ρ M)`.

mod grid;
mod operator;
mod sampleset;
mod smeared;
mod state;

pub use grid::Grid;
pub use operator::{
    evolve, free_hamiltonian, heisenberg, luders_reduce, potential_hamiltonian, Evolve,
    LinearOperator, Spectrum,
};
pub use sampleset::{Interval, SampleSet, Snapped};
pub use smeared::{
    gaussian_density, smeared_chi, smearing_relative_error, SmearedIndicator, SmearingKind,
    SmearingReport,
};
pub use state::{DensityOperator, WaveFunction, WaveFunctionSnapshot};
