//! Thin wrapper over `rustfft` for the periodic position grid.

use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::C64;

/// Forward and inverse plans of one length, normalised so that
/// `inverse(forward(v)) == v`.
#[derive(Clone)]
pub struct FourierPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    len: usize,
}

impl fmt::Debug for FourierPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierPair").field("len", &self.len).finish()
    }
}

impl FourierPair {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalised forward transform in place.
    pub fn forward(&self, data: &mut [C64]) {
        self.forward.process(data);
    }

    /// Inverse transform in place, including the `1/N` factor.
    pub fn inverse(&self, data: &mut [C64]) {
        self.inverse.process(data);
        let scale = 1.0 / self.len as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    /// Multiplies the spectrum of `data` by `multiplier` (DFT mode order).
    pub fn apply_diagonal(&self, data: &mut [C64], multiplier: &[C64]) {
        self.forward(data);
        for (v, m) in data.iter_mut().zip(multiplier) {
            *v *= m;
        }
        self.inverse(data);
    }
}

/// Angular wavenumbers `2π·fftfreq(n, dx)` in DFT order.
pub fn wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let l = n as f64 * dx;
    (0..n)
        .map(|j| {
            let s = if j < n.div_ceil(2) { j as f64 } else { j as f64 - n as f64 };
            2.0 * std::f64::consts::PI * s / l
        })
        .collect()
}
