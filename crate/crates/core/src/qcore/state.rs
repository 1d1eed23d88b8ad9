use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Grid, SampleSet};
use crate::linalg::{hermiticity_defect, hermitian_eigenvalues};
use crate::{CMatrix, Error, Result, C64};

/// Pure state sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    amplitudes: Vec<C64>,
}

/// JSON form of a wave function: grid parameters plus interleaved
/// `[re0, im0, re1, im1, …]` amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveFunctionSnapshot {
    pub grid: Grid,
    pub amplitudes: Vec<f64>,
}

impl WaveFunction {
    /// Wraps raw amplitudes; no normalisation is applied.
    pub fn new(grid: Grid, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::InvalidState(format!(
                "{} amplitudes for {} grid points",
                amplitudes.len(),
                grid.n_points()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        Ok(Self { grid, amplitudes })
    }

    /// Builds a normalised state from `f(x)` sampled at the grid points.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> C64) -> Result<Self> {
        let amps = grid.points().into_iter().map(f).collect();
        Self::new(grid, amps)?.normalized()
    }

    /// Gaussian packet whose position density has mean `x0` and standard
    /// deviation `sigma`, with mean momentum `k0`.
    pub fn gaussian(grid: Grid, x0: f64, sigma: f64, k0: f64) -> Result<Self> {
        if sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        let norm = (2.0 * PI * sigma * sigma).powf(-0.25);
        Self::from_fn(grid, |x| {
            let d = x - x0;
            C64::from_polar(norm * (-(d * d) / (4.0 * sigma * sigma)).exp(), k0 * x)
        })
    }

    /// Two-slit state `∝ e^{−(x−L/2)²/2σ²} + e^{−(x+L/2)²/2σ²}`.
    pub fn two_slit(grid: Grid, sigma: f64, separation: f64) -> Result<Self> {
        if sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        let h = 0.5 * separation;
        Self::from_fn(grid, |x| {
            let a = (-(x - h).powi(2) / (2.0 * sigma * sigma)).exp();
            let b = (-(x + h).powi(2) / (2.0 * sigma * sigma)).exp();
            C64::new(a + b, 0.0)
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// `Σ|ψ_i|² dx`.
    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_squared();
        if !(n > 0.0) {
            return Err(Error::InvalidState("zero wave function".into()));
        }
        let s = 1.0 / n.sqrt();
        for a in &mut self.amplitudes {
            *a *= s;
        }
        Ok(())
    }

    /// `|ψ(x_i)|²`.
    pub fn position_density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `∫_U |ψ|²` on the grid.
    pub fn probability_of_set(&self, set: &SampleSet) -> f64 {
        let dx = self.grid.dx();
        (0..self.grid.n_points())
            .filter(|&i| set.contains(self.grid.x(i)))
            .map(|i| self.amplitudes[i].norm_sqr() * dx)
            .sum()
    }

    /// `⟨ψ|φ⟩` including the `dx` weight.
    pub fn inner(&self, other: &WaveFunction) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            * self.grid.dx()
    }

    /// Probability mass within `margin` of either box edge.
    pub fn edge_mass(&self, margin: f64) -> f64 {
        let lo = self.grid.x_min() + margin;
        let hi = self.grid.x_max() - margin;
        let dx = self.grid.dx();
        (0..self.grid.n_points())
            .filter(|&i| {
                let x = self.grid.x(i);
                x < lo || x > hi
            })
            .map(|i| self.amplitudes[i].norm_sqr() * dx)
            .sum()
    }

    pub fn density_operator(&self) -> DensityOperator {
        let n = self.grid.n_points();
        let m = CMatrix::from_fn(n, n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityOperator { grid: self.grid, matrix: m }
    }

    pub fn snapshot(&self) -> WaveFunctionSnapshot {
        WaveFunctionSnapshot {
            grid: self.grid,
            amplitudes: self.amplitudes.iter().flat_map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn from_snapshot(s: &WaveFunctionSnapshot) -> Result<Self> {
        if s.amplitudes.len() % 2 != 0 {
            return Err(Error::InvalidState("odd number of interleaved values".into()));
        }
        let amps = s.amplitudes.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
        Self::new(s.grid, amps)
    }
}

/// Mixed state stored as kernel values `ρ(x_i, x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    grid: Grid,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, positivity and `dx·Tr ρ = 1`.
    pub fn new(grid: Grid, matrix: CMatrix) -> Result<Self> {
        let n = grid.n_points();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, grid has {n} points",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = hermiticity_defect(&matrix);
        if herm > 1e-10 {
            return Err(Error::NotHermitian(herm));
        }
        let trace = matrix.trace().re * grid.dx();
        if (trace - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidState(format!("dx·trace is {trace}, expected 1")));
        }
        let lowest = hermitian_eigenvalues(&matrix)[0] * grid.dx();
        if lowest < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:.3e}")));
        }
        Ok(Self { grid, matrix })
    }

    /// Convex combination of pure states; weights are renormalised.
    pub fn mixture(parts: &[(f64, WaveFunction)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let grid = *first.1.grid();
        let total: f64 = parts.iter().map(|p| p.0).sum();
        if parts.iter().any(|p| p.0 < 0.0) || total <= 0.0 {
            return Err(Error::InvalidState("mixture weights must be nonnegative".into()));
        }
        let n = grid.n_points();
        let mut m = CMatrix::zeros(n, n);
        for (w, psi) in parts {
            grid.ensure_same(psi.grid())?;
            let scale = C64::new(w / (total * psi.norm_squared()), 0.0);
            m += psi.density_operator().matrix * scale;
        }
        Ok(Self { grid, matrix: m })
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, matrix: CMatrix) -> Self {
        Self { grid, matrix }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `dx·Tr ρ`.
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re * self.grid.dx()
    }

    /// `ρ(x_i, x_i)`.
    pub fn position_density(&self) -> Vec<f64> {
        (0..self.grid.n_points()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// `dx·Tr(ρ M)` for an operator matrix `M`.
    pub fn expectation(&self, m: &CMatrix) -> C64 {
        crate::linalg::trace_of_product(&self.matrix, m) * self.grid.dx()
    }

    /// Real part of [`DensityOperator::expectation`].
    pub fn probability(&self, effect: &CMatrix) -> f64 {
        self.expectation(effect).re
    }

    pub fn probability_of_set(&self, set: &SampleSet) -> f64 {
        let dx = self.grid.dx();
        (0..self.grid.n_points())
            .filter(|&i| set.contains(self.grid.x(i)))
            .map(|i| self.matrix[(i, i)].re * dx)
            .sum()
    }
}
