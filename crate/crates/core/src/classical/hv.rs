//! Local hidden-variable models of a two-pointer measurement and the
//! factorisation check against the system's own stochastic process.
//!
//! Each model has a system coordinate `x` started from `ρ₀` and apparatus
//! variables `Q¹, Q²` drawn from their priors. The first measurement reads
//! its pointer off `x_{t₁}` and kicks the system with `Q¹` in a way that
//! leaves the law of `x_{t₁}` unchanged. In the local version the system
//! continues from the kicked position; the non-local version lets the
//! post-`t₁` evolution see the pre-kick position, so it depends on `Q¹`
//! through more than `x_{t₁}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bohm::{GridSampler, McEstimate};
use super::markov::MarkovKernel;
use crate::qcore::{Grid, Interval, SampleSet, SmearedIndicator};
use crate::quad::integrate;
use crate::{Error, Result};

/// Dynamics and kick of a hidden-variable model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum HvDynamics {
    /// Deterministic flow `x_t = x₀√(1 + (t/τ)²) + v·t`. At `t₁` the quantile
    /// `u` of the system under `ρ_{t₁}` is rotated to `frac(u + κQ¹)`, with
    /// `Q¹` uniform on `[0, 1)`. `spread_time = ∞` freezes the spreading.
    KickedMap { spread_time: f64, drift: f64, kick: f64 },
    /// Brownian motion with diffusion constant `D`. At `t₁` a Metropolis step
    /// targeting `ρ_{t₁}` moves the system, with proposal
    /// `x + κ(2Q¹ₐ − 1)` and acceptance variable `Q¹_b`. Evaluated by Monte
    /// Carlo with `samples` paths.
    MarkovJump { diffusion: f64, kick: f64, samples: usize, seed: u64 },
}

/// A hidden-variable model together with its locality flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalHvModel {
    pub dynamics: HvDynamics,
    /// Whether the post-`t₁` system update reads `Q¹` only through `x_{t₁}`.
    pub local: bool,
}

impl LocalHvModel {
    pub fn new(dynamics: HvDynamics) -> Result<Self> {
        let m = Self { dynamics, local: true };
        m.validate()?;
        Ok(m)
    }

    /// The same model with the post-`t₁` update restarted from the pre-kick
    /// position.
    pub fn non_local(self) -> Self {
        Self { local: false, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self.dynamics {
            HvDynamics::KickedMap { spread_time, drift, kick } => {
                if !(spread_time > 0.0) || !drift.is_finite() || !(0.0..=1.0).contains(&kick) {
                    return bad(format!(
                        "kicked map needs τ > 0, finite drift and kick in [0, 1]; got \
                         τ = {spread_time}, v = {drift}, κ = {kick}"
                    ));
                }
            }
            HvDynamics::MarkovJump { diffusion, kick, samples, .. } => {
                if !(diffusion > 0.0 && diffusion.is_finite()) || !(kick >= 0.0) || samples == 0 {
                    return bad(format!(
                        "Markov jump model needs D > 0, κ ≥ 0 and samples > 0; got \
                         D = {diffusion}, κ = {kick}, samples = {samples}"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Initial density on a grid.
#[derive(Debug, Clone, Copy)]
pub struct GridDensity<'a> {
    pub grid: &'a Grid,
    pub values: &'a [f64],
}

impl GridDensity<'_> {
    fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx()
    }

    // ∫_S ρ for the piecewise-constant density.
    fn integral_over(&self, set: &[Interval]) -> f64 {
        let dx = self.grid.dx();
        let mut acc = 0.0;
        for iv in set {
            for (i, r) in self.values.iter().enumerate() {
                let (a, b) = (self.grid.edge(i), self.grid.edge(i) + dx);
                let overlap = (iv.hi.min(b) - iv.lo.max(a)).max(0.0);
                acc += r * overlap;
            }
        }
        acc / self.mass()
    }

    fn std_dev(&self) -> f64 {
        let z: f64 = self.values.iter().sum();
        let pts = self.grid.points();
        let m: f64 = pts.iter().zip(self.values).map(|(x, r)| x * r).sum::<f64>() / z;
        let v: f64 = pts.iter().zip(self.values).map(|(x, r)| (x - m).powi(2) * r).sum::<f64>() / z;
        (v + self.grid.dx().powi(2) / 12.0).sqrt()
    }
}

fn check_inputs(rho0: &GridDensity, times: (f64, f64)) -> Result<()> {
    if rho0.values.len() != rho0.grid.n_points() || rho0.values.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidState("density must be non-negative on the grid".into()));
    }
    if !(times.0 >= 0.0 && times.1 > times.0 && times.1.is_finite()) {
        return Err(Error::InvalidHistory(format!(
            "need 0 ≤ t₁ < t₂, got ({}, {})",
            times.0, times.1
        )));
    }
    Ok(())
}

fn stretch(spread_time: f64, t: f64) -> f64 {
    (1.0 + (t / spread_time).powi(2)).sqrt()
}

// Starting points whose flow lands in `set` at time t.
fn preimage(set: &SampleSet, spread_time: f64, drift: f64, t: f64) -> Vec<Interval> {
    let a = stretch(spread_time, t);
    set.intervals()
        .into_iter()
        .map(|iv| Interval { lo: (iv.lo - drift * t) / a, hi: (iv.hi - drift * t) / a })
        .collect()
}

fn intersect(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let (lo, hi) = (x.lo.max(y.lo), x.hi.min(y.hi));
            if hi > lo {
                out.push(Interval { lo, hi });
            }
        }
    }
    out
}

// Arcs of the unit circle [0, 1).
fn shift_arcs(arcs: &[(f64, f64)], s: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &(a, b) in arcs {
        let (a, b) = (a + s, b + s);
        let k = a.floor();
        let (a, b) = (a - k, b - k);
        if b <= 1.0 {
            out.push((a, b));
        } else {
            out.push((a, 1.0));
            out.push((0.0, b - 1.0));
        }
    }
    out
}

fn overlap(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| (x.1.min(y.1) - x.0.max(y.0)).max(0.0)))
        .sum()
}

/// `p²(U₁,t₁;U₂,t₂) = ∫dx₀ dQ¹ dQ² ρ₀|φ|²|φ|² χ_{U₁}[X_{t₁}] χ_{U₂}[X_{t₂}]`
/// for a model whose locality flag is set.
pub fn local_hv_two_time(
    model: &LocalHvModel,
    rho0: GridDensity,
    sets: (&SampleSet, &SampleSet),
    times: (f64, f64),
) -> Result<McEstimate> {
    if !model.local {
        return Err(Error::LocalityViolated);
    }
    hv_two_time_unchecked(model, rho0, sets, times)
}

/// As [`local_hv_two_time`] but without the locality requirement.
pub fn hv_two_time_unchecked(
    model: &LocalHvModel,
    rho0: GridDensity,
    sets: (&SampleSet, &SampleSet),
    times: (f64, f64),
) -> Result<McEstimate> {
    model.validate()?;
    check_inputs(&rho0, times)?;
    match model.dynamics {
        HvDynamics::KickedMap { spread_time, drift, kick } => {
            // In quantile coordinates u₀ = F₀(x₀) the flow is the identity,
            // and each pointer set becomes arcs W_t(U) = F₀(flow_t⁻¹(U)).
            let sampler = GridSampler::new(*rho0.grid, rho0.values)?;
            let arcs = |set: &SampleSet, t: f64| -> Vec<(f64, f64)> {
                preimage(set, spread_time, drift, t)
                    .iter()
                    .map(|iv| (sampler.cdf(iv.lo), sampler.cdf(iv.hi)))
                    .filter(|(a, b)| b > a)
                    .collect()
            };
            let w1 = arcs(sets.0, times.0);
            let w2 = arcs(sets.1, times.1);
            // u₁ = frac(u₀ + κQ¹). Pointer 1 reads u₁; pointer 2 reads u₁
            // (local) or the pre-kick u₀ (non-local).
            let inner = |q: f64| -> f64 {
                let back1 = shift_arcs(&w1, -kick * q);
                if model.local {
                    let back2 = shift_arcs(&w2, -kick * q);
                    overlap(&back1, &back2)
                } else {
                    overlap(&back1, &w2)
                }
            };
            let value = integrate(inner, 0.0, 1.0, 1e-13).value;
            Ok(McEstimate { value, std_err: 0.0 })
        }
        HvDynamics::MarkovJump { diffusion, kick, samples, seed } => {
            let grid = *rho0.grid;
            let sampler = GridSampler::new(grid, rho0.values)?;
            let target = MarkovKernel::heat(grid, diffusion, times.0)?.apply(rho0.values);
            let s1 = (2.0 * diffusion * times.0).sqrt();
            let s2 = (2.0 * diffusion * (times.1 - times.0)).sqrt();
            let hits = (0..samples)
                .into_par_iter()
                .filter(|&i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    let x0 = sampler.sample(&mut rng);
                    let pre = x0 + s1 * rng.sample::<f64, _>(StandardNormal);
                    let (qa, qb): (f64, f64) = (rng.random(), rng.random());
                    let proposal = pre + kick * (2.0 * qa - 1.0);
                    let ratio = grid.interpolate(&target, proposal) / grid.interpolate(&target, pre);
                    let post = if qb < ratio { proposal } else { pre };
                    let from = if model.local { post } else { pre };
                    let x2 = from + s2 * rng.sample::<f64, _>(StandardNormal);
                    sets.0.contains(post) && sets.1.contains(x2)
                })
                .count();
            Ok(McEstimate::from_counts(hits, samples))
        }
    }
}

/// The two-time probability of the system's own process, with no
/// apparatus: `∫dμ(x_{t₁}, x_{t₂}) χ_{U₁} χ_{U₂}`.
pub fn system_only_two_time(
    dynamics: &HvDynamics,
    rho0: GridDensity,
    sets: (&SampleSet, &SampleSet),
    times: (f64, f64),
) -> Result<McEstimate> {
    LocalHvModel { dynamics: *dynamics, local: true }.validate()?;
    check_inputs(&rho0, times)?;
    match *dynamics {
        HvDynamics::KickedMap { spread_time, drift, .. } => {
            let a = preimage(sets.0, spread_time, drift, times.0);
            let b = preimage(sets.1, spread_time, drift, times.1);
            Ok(McEstimate { value: rho0.integral_over(&intersect(&a, &b)), std_err: 0.0 })
        }
        HvDynamics::MarkovJump { diffusion, samples, seed, .. } => {
            let sampler = GridSampler::new(*rho0.grid, rho0.values)?;
            let s1 = (2.0 * diffusion * times.0).sqrt();
            let s2 = (2.0 * diffusion * (times.1 - times.0)).sqrt();
            // A stream family disjoint from the model's.
            let base = seed ^ 0x5e_ed0f_5e1f;
            let hits = (0..samples)
                .into_par_iter()
                .filter(|&i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(base);
                    rng.set_stream(i as u64);
                    let x1 = sampler.sample(&mut rng) + s1 * rng.sample::<f64, _>(StandardNormal);
                    let x2 = x1 + s2 * rng.sample::<f64, _>(StandardNormal);
                    sets.0.contains(x1) && sets.1.contains(x2)
                })
                .count();
            Ok(McEstimate::from_counts(hits, samples))
        }
    }
}

/// Outcome of [`unsharp_hv_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnsharpReport {
    pub delta: f64,
    /// Standard deviation of `ρ₀`, the length scale `L`.
    pub length_scale: f64,
    /// `|p²_δ − p²_sharp|`.
    pub defect: f64,
    /// `defect / (δ/L)`.
    pub c: f64,
    /// Monte-Carlo standard error of the defect, zero for deterministic models.
    pub std_err: f64,
}

/// Compares pointers calibrated up to `O(δ)` (reading `U` with probability
/// `χ^δ_U(x)`) with the sharp system-only two-time probability.
pub fn unsharp_hv_check(
    model: &LocalHvModel,
    rho0: GridDensity,
    delta: f64,
    sets: (&SampleSet, &SampleSet),
    times: (f64, f64),
) -> Result<UnsharpReport> {
    if !model.local {
        return Err(Error::LocalityViolated);
    }
    model.validate()?;
    check_inputs(&rho0, times)?;
    let c1 = SmearedIndicator::gaussian(sets.0.clone(), delta)?;
    let c2 = SmearedIndicator::gaussian(sets.1.clone(), delta)?;
    let length_scale = rho0.std_dev();
    let (defect, std_err) = match model.dynamics {
        HvDynamics::KickedMap { spread_time, drift, .. } => {
            let sharp = system_only_two_time(&model.dynamics, rho0, sets, times)?.value;
            let (a1, a2) = (stretch(spread_time, times.0), stretch(spread_time, times.1));
            let dx = rho0.grid.dx();
            let mut smeared = 0.0;
            for (i, r) in rho0.values.iter().enumerate() {
                if *r == 0.0 {
                    continue;
                }
                let lo = rho0.grid.edge(i);
                let f = |x: f64| {
                    c1.value(x * a1 + drift * times.0) * c2.value(x * a2 + drift * times.1)
                };
                smeared += r * integrate(f, lo, lo + dx, 1e-14).value;
            }
            ((smeared / rho0.mass() - sharp).abs(), 0.0)
        }
        HvDynamics::MarkovJump { diffusion, samples, seed, .. } => {
            // Sharp and smeared readings of the same paths.
            let sampler = GridSampler::new(*rho0.grid, rho0.values)?;
            let s1 = (2.0 * diffusion * times.0).sqrt();
            let s2 = (2.0 * diffusion * (times.1 - times.0)).sqrt();
            let diffs: Vec<f64> = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    let x1 = sampler.sample(&mut rng) + s1 * rng.sample::<f64, _>(StandardNormal);
                    let x2 = x1 + s2 * rng.sample::<f64, _>(StandardNormal);
                    let sharp = if sets.0.contains(x1) && sets.1.contains(x2) { 1.0 } else { 0.0 };
                    c1.value(x1) * c2.value(x2) - sharp
                })
                .collect();
            let n = diffs.len() as f64;
            let mean = diffs.iter().sum::<f64>() / n;
            let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
            (mean.abs(), (var / n).sqrt())
        }
    };
    Ok(UnsharpReport { delta, length_scale, defect, c: defect * length_scale / delta, std_err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::WaveFunction;

    fn setup() -> (Grid, Vec<f64>) {
        let g = Grid::new(256, -16.0, 16.0).unwrap();
        let rho = WaveFunction::two_slit(g, 0.7, 3.0).unwrap().position_density();
        (g, rho)
    }

    fn kicked(kick: f64) -> LocalHvModel {
        LocalHvModel::new(HvDynamics::KickedMap { spread_time: 1.0, drift: 0.3, kick }).unwrap()
    }

    #[test]
    fn trivial_dynamics_gives_intersection() {
        let (g, rho) = setup();
        let d = GridDensity { grid: &g, values: &rho };
        let m = LocalHvModel::new(HvDynamics::KickedMap {
            spread_time: f64::INFINITY,
            drift: 0.0,
            kick: 0.0,
        })
        .unwrap();
        let u1 = SampleSet::interval(-2.0, 1.0).unwrap();
        let u2 = SampleSet::above(0.0);
        let p = local_hv_two_time(&m, d, (&u1, &u2), (0.5, 1.0)).unwrap().value;
        let direct = d.integral_over(&u1.intersect(&u2).intervals());
        assert!((p - direct).abs() < 1e-12);
    }

    #[test]
    fn kicked_map_factorises() {
        let (g, rho) = setup();
        let d = GridDensity { grid: &g, values: &rho };
        let u1 = SampleSet::above(0.0);
        let u2 = SampleSet::interval(-1.0, 2.5).unwrap();
        for kick in [0.0, 0.37, 1.0] {
            let m = kicked(kick);
            let a = local_hv_two_time(&m, d, (&u1, &u2), (0.5, 1.5)).unwrap().value;
            let b = system_only_two_time(&m.dynamics, d, (&u1, &u2), (0.5, 1.5)).unwrap().value;
            assert!((a - b).abs() < 1e-10, "κ={kick}: {a} vs {b}");
        }
    }

    #[test]
    fn non_local_model_is_refused_and_breaks_identity() {
        let (g, rho) = setup();
        let d = GridDensity { grid: &g, values: &rho };
        let u1 = SampleSet::above(0.0);
        let u2 = SampleSet::above(0.5);
        let m = kicked(1.0).non_local();
        assert_eq!(
            local_hv_two_time(&m, d, (&u1, &u2), (0.5, 1.5)),
            Err(Error::LocalityViolated)
        );
        let a = hv_two_time_unchecked(&m, d, (&u1, &u2), (0.5, 1.5)).unwrap().value;
        let b = system_only_two_time(&m.dynamics, d, (&u1, &u2), (0.5, 1.5)).unwrap().value;
        assert!((a - b).abs() > 1e-2, "{a} vs {b}");
    }

    #[test]
    fn markov_model_factorises() {
        let (g, rho) = setup();
        let d = GridDensity { grid: &g, values: &rho };
        let m = LocalHvModel::new(HvDynamics::MarkovJump {
            diffusion: 0.5,
            kick: 1.5,
            samples: 100_000,
            seed: 5,
        })
        .unwrap();
        let u1 = SampleSet::above(0.0);
        let u2 = SampleSet::above(0.0);
        let a = local_hv_two_time(&m, d, (&u1, &u2), (0.5, 1.0)).unwrap();
        let b = system_only_two_time(&m.dynamics, d, (&u1, &u2), (0.5, 1.0)).unwrap();
        let se = a.std_err.hypot(b.std_err);
        assert!((a.value - b.value).abs() < 3.0 * se, "{a:?} vs {b:?}");
        let broken = hv_two_time_unchecked(&m.non_local(), d, (&u1, &u2), (0.5, 1.0)).unwrap();
        assert!((broken.value - b.value).abs() > 3.0 * se, "{broken:?} vs {b:?}");
    }

    #[test]
    fn unsharp_defect_scales_with_delta() {
        let (g, rho) = setup();
        let d = GridDensity { grid: &g, values: &rho };
        let m = kicked(0.5);
        let u1 = SampleSet::above(0.0);
        let u2 = SampleSet::interval(-1.0, 2.5).unwrap();
        let l = d.std_dev();
        let coarse = unsharp_hv_check(&m, d, 0.01 * l, (&u1, &u2), (0.5, 1.5)).unwrap();
        let fine = unsharp_hv_check(&m, d, 1e-4 * l, (&u1, &u2), (0.5, 1.5)).unwrap();
        assert!(fine.defect < coarse.defect);
        assert!(fine.defect < 1e-3);
        assert!(coarse.defect < coarse.c * 0.01 + 1e-15);
        assert!(coarse.c < 1.0, "c = {}", coarse.c);
    }

    #[test]
    fn far_disjoint_sets_have_no_unsharp_defect() {
        let (g, rho) = setup();
        let d = GridDensity { grid: &g, values: &rho };
        let m = LocalHvModel::new(HvDynamics::KickedMap {
            spread_time: f64::INFINITY,
            drift: 0.0,
            kick: 0.0,
        })
        .unwrap();
        let u1 = SampleSet::interval(-10.0, -6.0).unwrap();
        let u2 = SampleSet::interval(6.0, 10.0).unwrap();
        let r = unsharp_hv_check(&m, d, 0.1, (&u1, &u2), (0.5, 1.0)).unwrap();
        assert!(r.defect < 1e-8, "{}", r.defect);
    }
}
