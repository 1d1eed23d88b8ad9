//! Two-pointer measuring device with impulsive couplings `x̂ ⊗ k̂_i`.
//!
//! Each device starts in `|Ψ₀⟩`, given by its momentum amplitudes on a
//! symmetric uniform k-grid. An impulse at `t_i` multiplies the `k_i`
//! component by `e^{−ik_i x̂}`, so the composite state after both impulses is
//!
//! `∫dk₁dk₂ (e^{−ik₂x̂} U(t₂−t₁) e^{−ik₁x̂} U(t₁) ψ₀) ⊗ |k₁⟩⟨k₁|Ψ₀⟩ ⊗ |k₂⟩⟨k₂|Ψ₀⟩`.
//!
//! Projected on pointer positions this factorises: with the device amplitude
//! `g(q) = Σ_k dk ⟨k|Ψ₀⟩ e^{ikq}/√2π`,
//! `⟨x, q₁, q₂|ψ_tot⟩ = g(q₂ − x) [U(t₂−t₁) g(q₁ − ·) ψ_{t₁}](x)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::qcore::{gaussian_density, LinearOperator, SampleSet, WaveFunction};
use crate::quad::gauss_legendre_on;
use crate::{Error, Result, C64};

/// Largest number of k-nodes per device.
pub const MAX_K_NODES: usize = 64;

/// Device momentum amplitudes `⟨k|Ψ₀⟩` on a symmetric uniform k-grid,
/// normalised so that `Σ dk |⟨k|Ψ₀⟩|² = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceState {
    k: Vec<f64>,
    amps: Vec<C64>,
    dk: f64,
    truncation_error: f64,
}

impl DeviceState {
    /// A single node is the momentum eigenstate `k = 0`, taken with `dk = 1`.
    pub fn new(k: Vec<f64>, amps: Vec<C64>) -> Result<Self> {
        let n = k.len();
        if n == 0 || n > MAX_K_NODES || amps.len() != n {
            return Err(Error::InvalidParameter(format!(
                "device needs 1..={MAX_K_NODES} k-nodes with one amplitude each, got {n} and {}",
                amps.len()
            )));
        }
        let dk = if n == 1 { 1.0 } else { k[1] - k[0] };
        let scale = k.iter().fold(dk.abs(), |m, v| m.max(v.abs()));
        for (i, &v) in k.iter().enumerate() {
            if (v + k[n - 1 - i]).abs() > 1e-12 * scale {
                return Err(Error::InvalidParameter("k-grid is not symmetric about 0".into()));
            }
            if n > 1 && (v - k[0] - i as f64 * dk).abs() > 1e-9 * scale {
                return Err(Error::InvalidParameter("k-grid is not uniform".into()));
            }
        }
        if !(dk > 0.0) {
            return Err(Error::InvalidParameter("k-grid must be increasing".into()));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * dk;
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidState(format!("device norm {norm}, expected 1")));
        }
        Ok(Self { k, amps, dk, truncation_error: 0.0 })
    }

    /// Gaussian device whose pointer density is `f_δ`: momentum amplitudes
    /// `∝ exp(−δ²k²)`, so `σ_k = 1/(2δ)`. The grid is truncated at `6σ_k`
    /// and the amplitudes renormalised; the discarded mass is recorded.
    pub fn gaussian(delta: f64, nodes: usize) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) || nodes < 2 || nodes > MAX_K_NODES {
            return Err(Error::InvalidParameter(format!(
                "gaussian device needs δ > 0 and 2..={MAX_K_NODES} nodes"
            )));
        }
        let sigma_k = 0.5 / delta;
        let k_max = 6.0 * sigma_k;
        let dk = 2.0 * k_max / (nodes - 1) as f64;
        let k: Vec<f64> = (0..nodes).map(|i| -k_max + i as f64 * dk).collect();
        let c = (2.0 * delta * delta / PI).powf(0.25);
        let raw: Vec<f64> = k.iter().map(|v| c * (-(delta * v).powi(2)).exp()).collect();
        let norm: f64 = raw.iter().map(|a| a * a).sum::<f64>() * dk;
        // Continuum mass beyond ±6σ_k.
        let truncation_error = libm::erfc(6.0 * std::f64::consts::SQRT_2);
        let s = norm.sqrt();
        Ok(Self {
            k,
            amps: raw.iter().map(|a| C64::new(a / s, 0.0)).collect(),
            dk,
            truncation_error,
        })
    }

    /// The momentum eigenstate `k = 0`: no kick is transferred.
    pub fn momentum_delta() -> Self {
        Self { k: vec![0.0], amps: vec![C64::new(1.0, 0.0)], dk: 1.0, truncation_error: 0.0 }
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn dk(&self) -> f64 {
        self.dk
    }

    pub fn truncation_error(&self) -> f64 {
        self.truncation_error
    }

    /// Pointer period `2π/dk` of the discretised device; infinite for a
    /// single node.
    pub fn period(&self) -> f64 {
        if self.k.len() == 1 {
            f64::INFINITY
        } else {
            2.0 * PI / self.dk
        }
    }

    /// Standard deviation of `|⟨k|Ψ₀⟩|²`.
    pub fn momentum_spread(&self) -> f64 {
        let w: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr() * self.dk).collect();
        let mean: f64 = w.iter().zip(&self.k).map(|(w, k)| w * k).sum();
        w.iter().zip(&self.k).map(|(w, k)| w * (k - mean).powi(2)).sum::<f64>().sqrt()
    }

    fn coefficients(&self) -> Vec<C64> {
        let s = self.dk / (2.0 * PI).sqrt();
        self.amps.iter().map(|a| a * s).collect()
    }

    /// Pointer amplitude `g(q)`.
    pub fn position_amplitude(&self, q: f64) -> C64 {
        self.coefficients()
            .iter()
            .zip(&self.k)
            .map(|(c, k)| c * C64::from_polar(1.0, k * q))
            .sum()
    }
}

/// System and the common initial state of both devices.
#[derive(Debug, Clone, PartialEq)]
pub struct ApparatusState {
    pub system: WaveFunction,
    pub device: DeviceState,
}

/// Impulse times of the two couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSpec {
    pub t1: f64,
    pub t2: f64,
}

impl CouplingSpec {
    pub fn validate(&self) -> Result<()> {
        if self.t1 >= 0.0 && self.t2 > self.t1 && self.t2.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "impulse times need 0 ≤ t1 < t2, got {} and {}",
                self.t1, self.t2
            )))
        }
    }
}

/// Effective resolution of a device.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolutionFit {
    /// Standard deviation of the pointer density `|g|²`.
    pub delta: f64,
    /// Relative L² distance between `|g|²` and `f_δ`.
    pub residual: f64,
    pub truncation_error: f64,
}

/// Width of the induced effect density `Π_y(x) = |g(y − x)|²`, measured
/// over one pointer period and compared with the Gaussian of the same width.
pub fn resolution_from_device(device: &DeviceState) -> ResolutionFit {
    let period = device.period();
    if !period.is_finite() {
        return ResolutionFit { delta: f64::INFINITY, residual: 1.0, truncation_error: 0.0 };
    }
    let m = 2048;
    let dq = period / m as f64;
    let q: Vec<f64> = (0..m).map(|i| -0.5 * period + (i as f64 + 0.5) * dq).collect();
    let dens: Vec<f64> = q.iter().map(|&v| device.position_amplitude(v).norm_sqr()).collect();
    let mass: f64 = dens.iter().sum::<f64>() * dq;
    let mean: f64 = q.iter().zip(&dens).map(|(q, d)| q * d).sum::<f64>() * dq / mass;
    let var: f64 = q.iter().zip(&dens).map(|(q, d)| (q - mean).powi(2) * d).sum::<f64>() * dq / mass;
    let delta = var.sqrt();
    let mut num = 0.0;
    let mut den = 0.0;
    for (q, d) in q.iter().zip(&dens) {
        let f = gaussian_density(q - mean, delta);
        num += (d / mass - f).powi(2);
        den += f * f;
    }
    ResolutionFit { delta, residual: (num / den).sqrt(), truncation_error: device.truncation_error }
}

/// The composite state after both impulses, held in factored form.
#[derive(Debug, Clone)]
pub struct CompositeState {
    ham: LinearOperator,
    device: DeviceState,
    coupling: CouplingSpec,
    psi_t1: Vec<C64>,
    points: Vec<f64>,
    dx: f64,
    window: (f64, f64),
    resolution: f64,
}

/// Builds the composite state. The pointer window is the system box
/// widened by `6δ` on each side; the device is rejected when its pointer
/// period is shorter than the window, since shifted copies of `g` would then
/// overlap inside it.
pub fn impulsive_total_state(
    app: &ApparatusState,
    ham: &LinearOperator,
    c: CouplingSpec,
) -> Result<CompositeState> {
    c.validate()?;
    let grid = *app.system.grid();
    grid.ensure_same(ham.grid())?;
    let resolution = resolution_from_device(&app.device).delta;
    let window = if resolution.is_finite() {
        (grid.x_min() - 6.0 * resolution, grid.x_max() + 6.0 * resolution)
    } else {
        (grid.x_min(), grid.x_max())
    };
    let period = app.device.period();
    if period < window.1 - window.0 {
        return Err(Error::Aliasing(format!(
            "pointer period {period:.4} is shorter than the pointer window {:.4}; \
             refine the k-grid",
            window.1 - window.0
        )));
    }
    let psi_t1 = ham.apply_propagator(app.system.amplitudes(), c.t1)?;
    Ok(CompositeState {
        ham: ham.clone(),
        device: app.device.clone(),
        coupling: c,
        psi_t1,
        points: grid.points(),
        dx: grid.dx(),
        window,
        resolution,
    })
}

impl CompositeState {
    /// Pointer window `[q_min, q_max]` used by the set quadratures.
    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    /// Effective device resolution.
    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    /// Squared norm in the k-representation, `Σ dk₁dk₂ |a₁|²|a₂|² ‖φ_{k₁k₂}‖²`.
    pub fn k_norm(&self) -> Result<f64> {
        let mut total = 0.0;
        let dt = self.coupling.t2 - self.coupling.t1;
        for (k1, a1) in self.device.k.iter().zip(&self.device.amps) {
            let kicked: Vec<C64> = self
                .psi_t1
                .iter()
                .zip(&self.points)
                .map(|(p, x)| p * C64::from_polar(1.0, -k1 * x))
                .collect();
            let moved = self.ham.apply_propagator(&kicked, dt)?;
            // The second kick is a phase and leaves the system norm unchanged.
            let n1: f64 = moved.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dx;
            for a2 in &self.device.amps {
                total += self.device.dk.powi(2) * a1.norm_sqr() * a2.norm_sqr() * n1;
            }
        }
        Ok(total)
    }

    fn device_row(&self, q: f64) -> Vec<C64> {
        let c = self.device.coefficients();
        self.points
            .iter()
            .map(|x| c.iter().zip(&self.device.k).map(|(c, k)| c * C64::from_polar(1.0, k * (q - x))).sum())
            .collect()
    }

    fn after_first(&self, q1: f64) -> Result<Vec<C64>> {
        let g = self.device_row(q1);
        let v: Vec<C64> = g.iter().zip(&self.psi_t1).map(|(g, p)| g * p).collect();
        self.ham.apply_propagator(&v, self.coupling.t2 - self.coupling.t1)
    }

    /// System amplitude `⟨x, q₁, q₂|ψ_tot(t₂)⟩` at every grid point.
    pub fn pointer_amplitude(&self, q1: f64, q2: f64) -> Result<Vec<C64>> {
        let v = self.after_first(q1)?;
        Ok(self.device_row(q2).iter().zip(&v).map(|(g, a)| g * a).collect())
    }

    fn nodes(&self, set: &SampleSet) -> Vec<(f64, f64)> {
        let h = if self.resolution.is_finite() { 0.5 * self.resolution } else { self.window.1 - self.window.0 };
        let mut out = Vec::new();
        for iv in set.intervals() {
            let a = iv.lo.max(self.window.0);
            let b = iv.hi.min(self.window.1);
            if b <= a {
                continue;
            }
            let pieces = ((b - a) / h).ceil().max(1.0) as usize;
            let w = (b - a) / pieces as f64;
            for p in 0..pieces {
                let lo = a + p as f64 * w;
                let (q, wq) = gauss_legendre_on(8, lo, lo + w);
                out.extend(q.into_iter().zip(wq));
            }
        }
        out
    }

    /// `G_U(x) = ∫_U dq |g(q − x)|²`.
    fn pointer_effect(&self, set: &SampleSet) -> Vec<f64> {
        let mut acc = vec![0.0; self.points.len()];
        for (q, w) in self.nodes(set) {
            for (a, g) in acc.iter_mut().zip(self.device_row(q)) {
                *a += w * g.norm_sqr();
            }
        }
        acc
    }

    /// Joint pointer probabilities for every pair `(U₁[i], U₂[j])`,
    /// parallel over the first-pointer quadrature nodes.
    pub fn joint_table(&self, first: &[SampleSet], second: &[SampleSet]) -> Result<Vec<Vec<f64>>> {
        if !self.resolution.is_finite() {
            return Err(Error::InvalidParameter("pointer density is not normalisable".into()));
        }
        let effects: Vec<Vec<f64>> = second.par_iter().map(|s| self.pointer_effect(s)).collect();
        first
            .iter()
            .map(|u1| {
                let partial: Result<Vec<Vec<f64>>> = self
                    .nodes(u1)
                    .par_iter()
                    .map(|&(q, w)| {
                        let v = self.after_first(q)?;
                        Ok(effects
                            .iter()
                            .map(|e| w * self.dx * v.iter().zip(e).map(|(a, g)| a.norm_sqr() * g).sum::<f64>())
                            .collect())
                    })
                    .collect();
                Ok(partial?.iter().fold(vec![0.0; second.len()], |mut acc, row| {
                    acc.iter_mut().zip(row).for_each(|(a, r)| *a += r);
                    acc
                }))
            })
            .collect()
    }
}

/// Probability that pointer 1 reads in `u1` and pointer 2 in `u2`.
pub fn pointer_joint_distribution(state: &CompositeState, u1: &SampleSet, u2: &SampleSet) -> Result<f64> {
    Ok(state.joint_table(std::slice::from_ref(u1), std::slice::from_ref(u2))?[0][0])
}

/// One device coupled at `t`: probability that its pointer reads in `u`.
pub fn single_pointer_distribution(
    app: &ApparatusState,
    ham: &LinearOperator,
    t: f64,
    u: &SampleSet,
) -> Result<f64> {
    // The second impulse of a two-pointer state is irrelevant once its
    // pointer is summed over, so reuse the same quadrature with t₂ > t.
    let state = impulsive_total_state(app, ham, CouplingSpec { t1: t, t2: t + 1.0 })?;
    let psi = &state.psi_t1;
    let e = state.pointer_effect(u);
    Ok(state.dx * psi.iter().zip(&e).map(|(a, g)| a.norm_sqr() * g).sum::<f64>())
}
