//! Position marginal at time `t` of a two-slit state after an unsharp
//! position measurement at `t = 0` whose outcome is discarded.
//!
//! The initial state is `ψ ∝ e^{−(x−L/2)²/2σ²} + e^{−(x+L/2)²/2σ²}`. The first
//! measurement multiplies the density matrix by `e^{−(x−x′)²/8δ²}`; the
//! last-slot smearing convolves the density with a width-`δ` Gaussian.

use std::f64::consts::PI;

use super::FreeParams;
use crate::qcore::SampleSet;
use crate::quad::integrate;
use crate::Result;

struct Pattern {
    norm: f64,
    scale: f64,
    coherence: f64,
    wave: f64,
    half: f64,
}

impl Pattern {
    fn new(p: &FreeParams) -> Result<Self> {
        p.validate()?;
        let (sigma, l) = p.slits()?;
        let (m, t) = (p.mass, p.time);
        let bg = p.beta() + p.gamma()?;
        let overlap = (-l * l / (4.0 * sigma * sigma)).exp();
        Ok(Self {
            norm: m / (2.0 * PI.sqrt() * t * bg.sqrt() * (1.0 + overlap)),
            scale: m * m / (t * t * bg),
            coherence: 2.0
                * (-(l * l) / (4.0 * sigma * sigma) * (1.0 - 1.0 / (sigma * sigma * bg))).exp(),
            wave: m * l / (t * sigma * sigma * bg),
            half: 0.5 * l,
        })
    }

    fn direct(&self, x: f64) -> f64 {
        (-self.scale * (x - self.half).powi(2)).exp() + (-self.scale * (x + self.half).powi(2)).exp()
    }

    fn cross(&self, x: f64) -> f64 {
        self.coherence * (-self.scale * x * x).exp() * (self.wave * x).cos()
    }

    fn density(&self, x: f64) -> f64 {
        self.norm * (self.direct(x) + self.cross(x))
    }

    // Standard deviation of each Gaussian bump.
    fn width(&self) -> f64 {
        (0.5 / self.scale).sqrt()
    }
}

/// Probability density of the marginal at `x`.
pub fn two_slit_density(x: f64, p: &FreeParams) -> Result<f64> {
    Ok(Pattern::new(p)?.density(x))
}

/// `∫_U p(x) dx`.
pub fn two_slit_marginal(u: &SampleSet, p: &FreeParams) -> Result<f64> {
    let pat = Pattern::new(p)?;
    let reach = pat.half + 40.0 * pat.width();
    let mut total = 0.0;
    for i in u.intervals() {
        let lo = i.lo.max(-reach);
        let hi = i.hi.min(reach);
        if hi <= lo {
            continue;
        }
        // Split into pieces no longer than a quarter fringe.
        let step = (0.25 * 2.0 * PI / pat.wave).min(pat.width()).max(1e-6);
        let pieces = ((hi - lo) / step).ceil().max(1.0) as usize;
        let h = (hi - lo) / pieces as f64;
        for k in 0..pieces {
            let a = lo + k as f64 * h;
            total += integrate(|x| pat.density(x), a, a + h, 1e-13).value;
        }
    }
    Ok(total)
}

/// Fringe period `2πtσ²(β+γ)/(mL)`.
pub fn interference_period(p: &FreeParams) -> Result<f64> {
    let (sigma, l) = p.slits()?;
    Ok(2.0 * PI * p.time * sigma * sigma * (p.beta() + p.gamma()?) / (p.mass * l))
}

/// Size of the interference term relative to the two direct terms at `x = 0`.
pub fn interference_ratio(p: &FreeParams) -> Result<f64> {
    let pat = Pattern::new(p)?;
    Ok(pat.cross(0.0).abs() / pat.direct(0.0))
}

/// Local maxima of the density on `[−half_width, half_width]`, located on a
/// sampling grid of `n` points and refined by parabolic interpolation.
pub fn density_peaks(p: &FreeParams, half_width: f64, n: usize) -> Result<Vec<f64>> {
    let pat = Pattern::new(p)?;
    let h = 2.0 * half_width / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|k| -half_width + k as f64 * h).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| pat.density(x)).collect();
    let mut peaks = Vec::new();
    for k in 1..n - 1 {
        if ys[k] > ys[k - 1] && ys[k] >= ys[k + 1] {
            let denom = ys[k - 1] - 2.0 * ys[k] + ys[k + 1];
            let shift = if denom != 0.0 { 0.5 * (ys[k - 1] - ys[k + 1]) / denom } else { 0.0 };
            peaks.push(xs[k] + shift * h);
        }
    }
    Ok(peaks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalised() {
        for &(t, d, s, l) in &[(1.0, 0.3, 1.0, 4.0), (5.0, 2.0, 0.5, 3.0), (0.5, 0.05, 1.0, 6.0)] {
            let p = FreeParams::new(1.0, t, d).unwrap().with_slits(s, l).unwrap();
            let total = two_slit_marginal(&SampleSet::full(), &p).unwrap();
            assert!((total - 1.0).abs() < 1e-6, "{total}");
        }
    }

    #[test]
    fn zero_separation_is_single_gaussian() {
        let p = FreeParams::new(1.0, 2.0, 0.4).unwrap().with_slits(0.8, 0.0).unwrap();
        let bg = p.beta() + p.gamma().unwrap();
        let var = p.time * p.time * bg / (2.0 * p.mass * p.mass);
        for &x in &[0.0, 0.7, -2.0] {
            let g = (-x * x / (2.0 * var)).exp() / (2.0 * PI * var).sqrt();
            assert!((two_slit_density(x, &p).unwrap() - g).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric() {
        let p = FreeParams::new(1.0, 1.5, 0.3).unwrap().with_slits(1.0, 4.0).unwrap();
        let a = two_slit_marginal(&SampleSet::above(0.0), &p).unwrap();
        assert!((a - 0.5).abs() < 1e-9);
    }

    #[test]
    fn large_delta_washes_out_interference() {
        let p = FreeParams::new(1.0, 5.0, 50.0).unwrap().with_slits(1.0, 6.0).unwrap();
        assert!(interference_ratio(&p).unwrap() < 1e-3);
        let q = FreeParams::new(1.0, 5.0, 2.5f64.sqrt()).unwrap().with_slits(1.0, 6.0).unwrap();
        assert!(interference_ratio(&q).unwrap() > 0.05);
    }

    #[test]
    fn peak_spacing_matches_period() {
        let p = FreeParams::new(1.0, 200.0, 10.0).unwrap().with_slits(1.0, 10.0).unwrap();
        let period = interference_period(&p).unwrap();
        let peaks = density_peaks(&p, 1.6 * period, 4001).unwrap();
        let centre = peaks.iter().copied().min_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap();
        assert!(centre.abs() < 1e-6);
        let next = peaks.iter().copied().filter(|&x| x > 1.0).fold(f64::INFINITY, f64::min);
        assert!(((next - centre) / period - 1.0).abs() < 0.05, "{next} vs {period}");
    }
}
