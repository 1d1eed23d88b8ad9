//! Bohmian trajectories: guidance velocity, quantum-equilibrium sampling,
//! ensembles and multi-time path probabilities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::qcore::{Grid, LinearOperator, Spectrum, WaveFunction};
use crate::seqmeas::HistorySpec;
use crate::{Error, Result, C64};

/// `|ψ|` below this counts as a node.
pub const NODE_THRESHOLD: f64 = 1e-10;

/// Consecutive step reductions before a trajectory is given up.
pub const MAX_RETRIES: usize = 10;

/// Critical value of `√n·D` for the one-sample KS test at level 0.01.
pub const KS_CRITICAL_001: f64 = 1.628;

/// Fourth-order centred difference of periodic grid samples.
pub fn derivative(grid: &Grid, values: &[C64]) -> Vec<C64> {
    let n = values.len();
    let h = grid.dx();
    (0..n)
        .map(|i| {
            let at = |k: isize| values[(i as isize + k).rem_euclid(n as isize) as usize];
            (at(-2) - at(-1) * 8.0 + at(1) * 8.0 - at(2)) / (12.0 * h)
        })
        .collect()
}

fn velocity_from(grid: &Grid, psi: &[C64], dpsi: &[C64], x: f64, mass: f64) -> Result<f64> {
    let p = grid.interpolate(psi, x);
    if p.norm() < NODE_THRESHOLD {
        return Err(Error::NearNode(x));
    }
    let d = grid.interpolate(dpsi, x);
    Ok((d / p).im / mass)
}

/// `v = Im(∂ₓψ/ψ)/m` at `x`; `ψ` and `∂ₓψ` are interpolated linearly
/// between grid points.
pub fn bohm_velocity(psi: &WaveFunction, x: f64, mass: f64) -> Result<f64> {
    check_mass(mass)?;
    let d = derivative(psi.grid(), psi.amplitudes());
    velocity_from(psi.grid(), psi.amplitudes(), &d, x, mass)
}

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")))
    }
}

/// Inverse-CDF sampler for the piecewise-constant density of grid values.
#[derive(Debug, Clone)]
pub struct GridSampler {
    grid: Grid,
    cdf: Vec<f64>,
}

impl GridSampler {
    pub fn new(grid: Grid, density: &[f64]) -> Result<Self> {
        if density.len() != grid.n_points() || density.iter().any(|d| !(*d >= 0.0)) {
            return Err(Error::InvalidState("density must be non-negative on the grid".into()));
        }
        let mut cdf = Vec::with_capacity(density.len() + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for d in density {
            acc += d;
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::InvalidState("density has zero mass".into()));
        }
        for c in &mut cdf {
            *c /= acc;
        }
        Ok(Self { grid, cdf })
    }

    /// Cumulative distribution at `x` (linear inside each cell).
    pub fn cdf(&self, x: f64) -> f64 {
        let dx = self.grid.dx();
        let s = (x - self.grid.x_min()) / dx;
        if s <= 0.0 {
            return 0.0;
        }
        let n = self.cdf.len() - 1;
        if s >= n as f64 {
            return 1.0;
        }
        let i = s.floor() as usize;
        let w = s - i as f64;
        self.cdf[i] * (1.0 - w) + self.cdf[i + 1] * w
    }

    /// Position with cumulative probability `u ∈ [0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let i = self.cdf.partition_point(|c| *c <= u).clamp(1, self.cdf.len() - 1) - 1;
        let (lo, hi) = (self.cdf[i], self.cdf[i + 1]);
        let w = if hi > lo { (u - lo) / (hi - lo) } else { 0.5 };
        self.grid.edge(i) + w * self.grid.dx()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// `√n · sup|F_n − F|` of a sample against a CDF.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let d = s
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    d * n.sqrt()
}

/// Pearson χ² p-value of `sample` against the grid density, using `bins`
/// cells of equal probability.
pub fn chi_square_p_value(sample: &[f64], sampler: &GridSampler, bins: usize) -> f64 {
    let n = sample.len() as f64;
    let mut counts = vec![0usize; bins];
    for x in sample {
        let b = ((sampler.cdf(*x) * bins as f64) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let expected = n / bins as f64;
    let chi2: f64 = counts.iter().map(|c| (*c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((bins - 1) as f64).expect("positive degrees of freedom");
    1.0 - dist.cdf(chi2)
}

// ψ, ∂ₓψ and their time derivatives on a uniform time lattice; values in
// between come from cubic Hermite interpolation.
struct Field {
    grid: Grid,
    mass: f64,
    step: f64,
    psi: Vec<Vec<C64>>,
    dpsi: Vec<Vec<C64>>,
    psi_t: Vec<Vec<C64>>,
    dpsi_t: Vec<Vec<C64>>,
}

impl Field {
    fn build(psi0: &WaveFunction, ham: &LinearOperator, t_end: f64, max_step: f64) -> Result<Self> {
        let grid = *psi0.grid();
        grid.ensure_same(ham.grid())?;
        let steps = if t_end > 0.0 { ((t_end / max_step).ceil() as usize).max(1) } else { 0 };
        let step = if steps > 0 { t_end / steps as f64 } else { 1.0 };
        let fourier = matches!(ham.spectrum(), Some(Spectrum::Fourier(_) | Spectrum::Diagonal(_)));
        let u = if fourier || t_end == 0.0 { None } else { Some(ham.propagator(step)?) };
        let mut field = Self {
            grid,
            mass: 0.0,
            step,
            psi: Vec::with_capacity(steps + 1),
            dpsi: Vec::with_capacity(steps + 1),
            psi_t: Vec::with_capacity(steps + 1),
            dpsi_t: Vec::with_capacity(steps + 1),
        };
        let mut cur = psi0.amplitudes().to_vec();
        for k in 0..=steps {
            if k > 0 {
                cur = match &u {
                    None => ham.apply_propagator(&cur, step)?,
                    Some(u) => (u * nalgebra::DVector::from_column_slice(&cur)).iter().copied().collect(),
                };
            }
            let h_psi = ham.matrix() * nalgebra::DVector::from_column_slice(&cur);
            let psi_t: Vec<C64> = h_psi.iter().map(|v| v * C64::new(0.0, -1.0)).collect();
            field.dpsi.push(derivative(&grid, &cur));
            field.dpsi_t.push(derivative(&grid, &psi_t));
            field.psi_t.push(psi_t);
            field.psi.push(cur.clone());
        }
        Ok(field)
    }

    fn velocity(&self, x: f64, t: f64) -> Result<f64> {
        let last = self.psi.len() - 1;
        let (k, s) = if last == 0 {
            (0, 0.0)
        } else {
            let pos = (t / self.step).clamp(0.0, last as f64);
            let k = (pos.floor() as usize).min(last - 1);
            (k, pos - k as f64)
        };
        let n = self.grid.n_points();
        let sx = (x - self.grid.x_min()) / self.grid.dx() - 0.5;
        let f = sx.floor();
        let w = sx - f;
        let i0 = (f as i64).rem_euclid(n as i64) as usize;
        let i1 = (i0 + 1) % n;
        let at = |v: &[Vec<C64>], vt: &[Vec<C64>], i: usize| -> C64 {
            if last == 0 {
                return v[0][i];
            }
            let h = self.step;
            let (s2, s3) = (s * s, s * s * s);
            let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
            let h10 = s3 - 2.0 * s2 + s;
            let h01 = -2.0 * s3 + 3.0 * s2;
            let h11 = s3 - s2;
            v[k][i] * h00 + vt[k][i] * (h10 * h) + v[k + 1][i] * h01 + vt[k + 1][i] * (h11 * h)
        };
        let p = at(&self.psi, &self.psi_t, i0) * (1.0 - w) + at(&self.psi, &self.psi_t, i1) * w;
        if p.norm() < NODE_THRESHOLD {
            return Err(Error::NearNode(x));
        }
        let d = at(&self.dpsi, &self.dpsi_t, i0) * (1.0 - w) + at(&self.dpsi, &self.dpsi_t, i1) * w;
        Ok((d / p).im / self.mass)
    }
}

/// Integrator settings for [`bohm_trajectories`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BohmSettings {
    /// Relative and absolute error target per step.
    pub tolerance: f64,
    /// Spacing of the stored wave-function snapshots.
    pub snapshot_step: f64,
}

impl Default for BohmSettings {
    fn default() -> Self {
        Self { tolerance: 1e-8, snapshot_step: 0.01 }
    }
}

/// A quantum-equilibrium ensemble of Bohmian trajectories.
#[derive(Debug, Clone)]
pub struct BohmEnsemble {
    pub psi0: WaveFunction,
    pub mass: f64,
    pub times: Vec<f64>,
    /// Starting points of the kept trajectories, in sample order.
    pub initial_points: Vec<f64>,
    /// `trajectories[j][k]` is the position of trajectory `j` at `times[k]`.
    pub trajectories: Vec<Vec<f64>>,
    /// Trajectories abandoned after repeated step failures.
    pub discarded: usize,
}

/// Summary written next to exported trajectory bundles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub mass: f64,
    pub times: Vec<f64>,
    pub kept: usize,
    pub discarded: usize,
    pub crossings: usize,
    pub mean: Vec<f64>,
    pub std_dev: Vec<f64>,
}

impl BohmEnsemble {
    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    /// Positions of all trajectories at `times[k]`.
    pub fn positions_at(&self, k: usize) -> Vec<f64> {
        self.trajectories.iter().map(|tr| tr[k]).collect()
    }

    /// Number of neighbouring pairs (ordered by starting point) whose order
    /// flips at some stored time. Zero for a 1-D Bohmian flow.
    pub fn crossings(&self) -> usize {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|a, b| self.initial_points[*a].total_cmp(&self.initial_points[*b]));
        order
            .windows(2)
            .filter(|w| {
                let (a, b) = (&self.trajectories[w[0]], &self.trajectories[w[1]]);
                a.iter().zip(b).any(|(xa, xb)| xa > xb)
            })
            .count()
    }

    /// `√n·D` of the starting points against the grid density of `ψ₀`.
    pub fn initial_ks_statistic(&self) -> Result<f64> {
        let s = GridSampler::new(*self.psi0.grid(), &self.psi0.position_density())?;
        Ok(ks_statistic(&self.initial_points, |x| s.cdf(x)))
    }

    /// χ² p-value of the positions at `times[k]` against `|Ψ(x, t_k)|²`.
    pub fn equivariance_p_value(&self, ham: &LinearOperator, k: usize, bins: usize) -> Result<f64> {
        let t = *self
            .times
            .get(k)
            .ok_or_else(|| Error::InvalidParameter(format!("no stored time with index {k}")))?;
        let amps = ham.apply_propagator(self.psi0.amplitudes(), t)?;
        let density: Vec<f64> = amps.iter().map(|a| a.norm_sqr()).collect();
        let s = GridSampler::new(*self.psi0.grid(), &density)?;
        Ok(chi_square_p_value(&self.positions_at(k), &s, bins))
    }

    pub fn summary(&self) -> EnsembleSummary {
        let n = self.len().max(1) as f64;
        let (mut mean, mut std_dev) = (Vec::new(), Vec::new());
        for k in 0..self.times.len() {
            let xs = self.positions_at(k);
            let m = xs.iter().sum::<f64>() / n;
            let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
            mean.push(m);
            std_dev.push(v.sqrt());
        }
        EnsembleSummary {
            mass: self.mass,
            times: self.times.clone(),
            kept: self.len(),
            discarded: self.discarded,
            crossings: self.crossings(),
            mean,
            std_dev,
        }
    }
}

// Dormand–Prince 5(4) coefficients.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn dopri_step(field: &Field, t: f64, x: f64, h: f64) -> Result<(f64, f64)> {
    let mut k = [0.0; 7];
    for s in 0..7 {
        let xs = x + h * (0..s).map(|j| A[s][j] * k[j]).sum::<f64>();
        k[s] = field.velocity(xs, t + C[s] * h)?;
    }
    let x5 = x + h * (0..7).map(|s| B5[s] * k[s]).sum::<f64>();
    let x4 = x + h * (0..7).map(|s| B4[s] * k[s]).sum::<f64>();
    Ok((x5, (x5 - x4).abs()))
}

fn integrate_path(field: &Field, x0: f64, times: &[f64], tol: f64, max_h: f64) -> Option<Vec<f64>> {
    let mut out = Vec::with_capacity(times.len());
    let mut t = 0.0;
    let mut x = x0;
    let mut h = max_h.min(0.01);
    for &target in times {
        while t < target {
            let mut retries = 0;
            loop {
                let step = h.min(target - t);
                match dopri_step(field, t, x, step) {
                    Ok((xn, err)) => {
                        let scale = tol * (1.0 + xn.abs());
                        let ratio = err / scale;
                        if ratio <= 1.0 {
                            t = if step == target - t { target } else { t + step };
                            x = xn;
                            let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).min(5.0) };
                            h = (step * grow).min(max_h);
                            break;
                        }
                        h = step * (0.9 * ratio.powf(-0.25)).max(0.1);
                    }
                    Err(_) => h = step * 0.25,
                }
                retries += 1;
                if retries > MAX_RETRIES {
                    return None;
                }
            }
        }
        out.push(x);
    }
    Some(out)
}

/// Samples `n_samples` starting points from `|ψ₀|²` and integrates the
/// guidance equation along `times` (non-decreasing, from time zero).
///
/// The wave function is propagated exactly in the eigenbasis of `ham` onto
/// a snapshot lattice; the trajectory integrator is an adaptive
/// Dormand–Prince 5(4) scheme. Each trajectory draws from its own ChaCha
/// stream `(seed, index)`, so results do not depend on the thread count.
pub fn bohm_trajectories(
    psi0: &WaveFunction,
    ham: &LinearOperator,
    mass: f64,
    times: &[f64],
    n_samples: usize,
    seed: u64,
    settings: BohmSettings,
) -> Result<BohmEnsemble> {
    check_mass(mass)?;
    if times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) || times.windows(2).any(|w| w[1] < w[0])
    {
        return Err(Error::InvalidHistory("times must be non-negative and increasing".into()));
    }
    if !(settings.tolerance > 0.0 && settings.snapshot_step > 0.0) {
        return Err(Error::InvalidParameter("tolerance and snapshot step must be positive".into()));
    }
    let t_end = times.last().copied().unwrap_or(0.0);
    let mut field = Field::build(psi0, ham, t_end, settings.snapshot_step)?;
    field.mass = mass;
    let sampler = GridSampler::new(*psi0.grid(), &psi0.position_density())?;
    let results: Vec<(f64, Option<Vec<f64>>)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let x0 = sampler.sample(&mut rng);
            (x0, integrate_path(&field, x0, times, settings.tolerance, settings.snapshot_step))
        })
        .collect();
    let mut ens = BohmEnsemble {
        psi0: psi0.clone(),
        mass,
        times: times.to_vec(),
        initial_points: Vec::with_capacity(n_samples),
        trajectories: Vec::with_capacity(n_samples),
        discarded: 0,
    };
    for (x0, tr) in results {
        match tr {
            Some(tr) => {
                ens.initial_points.push(x0);
                ens.trajectories.push(tr);
            }
            None => ens.discarded += 1,
        }
    }
    Ok(ens)
}

/// Monte-Carlo probability with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
}

impl McEstimate {
    pub fn from_counts(hits: usize, n: usize) -> Self {
        let p = if n == 0 { 0.0 } else { hits as f64 / n as f64 };
        Self { value: p, std_err: (p * (1.0 - p) / n.max(1) as f64).sqrt() }
    }
}

/// Fraction of trajectories lying in every `U_k` at `t_k`.
pub fn bohm_multitime_probability(ens: &BohmEnsemble, h: &HistorySpec) -> Result<McEstimate> {
    let mut slots = Vec::with_capacity(h.len());
    for e in h.entries() {
        let k = ens
            .times
            .iter()
            .position(|t| (t - e.time).abs() <= 1e-12 * t.abs().max(1.0))
            .ok_or_else(|| {
                Error::InvalidHistory(format!("time {} is not a trajectory time", e.time))
            })?;
        slots.push((k, &e.set));
    }
    let hits = ens
        .trajectories
        .iter()
        .filter(|tr| slots.iter().all(|(k, s)| s.contains(tr[*k])))
        .count();
    Ok(McEstimate::from_counts(hits, ens.len()))
}
