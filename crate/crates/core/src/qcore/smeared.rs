use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::{DensityOperator, SampleSet};
use crate::quad::integrate;
use crate::{Error, Result};

/// Shape of the smoothing kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmearingKind {
    Gaussian,
}

/// Indicator of a set convolved with a width-`delta` kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmearedIndicator {
    pub set: SampleSet,
    pub delta: f64,
    pub kind: SmearingKind,
}

/// Unit-normalised Gaussian `f_δ(x) = exp(−x²/2δ²)/√(2πδ²)`.
pub fn gaussian_density(x: f64, delta: f64) -> f64 {
    (-(x * x) / (2.0 * delta * delta)).exp() / (2.0 * PI * delta * delta).sqrt()
}

impl SmearedIndicator {
    pub fn gaussian(set: SampleSet, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
        }
        Ok(Self { set, delta, kind: SmearingKind::Gaussian })
    }

    /// `χ_U^δ(x) = ∫_U f_δ(x − y) dy`.
    pub fn value(&self, x: f64) -> f64 {
        match &self.set {
            SampleSet::Full => 1.0,
            SampleSet::Intervals(parts) => {
                let s = SQRT_2 * self.delta;
                let v: f64 = parts
                    .iter()
                    .map(|i| interval_mass((i.lo - x) / s, (i.hi - x) / s))
                    .sum();
                v.clamp(0.0, 1.0)
            }
        }
    }

    /// `∫|χ_U − χ_U^δ| dx`, which is `c·δ` with `c = 2/√(2π)` per boundary
    /// point when the boundaries are far apart.
    pub fn l1_deviation(&self) -> f64 {
        self.weighted_deviation(|_| 1.0)
    }

    fn weighted_deviation(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let reach = 12.0 * self.delta;
        let mut windows: Vec<(f64, f64)> = Vec::new();
        for i in self.set.intervals() {
            for e in [i.lo, i.hi] {
                if e.is_finite() {
                    windows.push((e - reach, e + reach));
                }
            }
        }
        windows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for w in windows {
            match merged.last_mut() {
                Some(last) if w.0 <= last.1 => last.1 = last.1.max(w.1),
                _ => merged.push(w),
            }
        }
        let mut total = 0.0;
        for (a, b) in merged {
            // Break at every boundary so the kink of χ_U is a node.
            let mut cuts = vec![a, b];
            for i in self.set.intervals() {
                for e in [i.lo, i.hi] {
                    if e > a && e < b {
                        cuts.push(e);
                    }
                }
            }
            cuts.sort_by(f64::total_cmp);
            for w in cuts.windows(2) {
                let f = |x: f64| {
                    let sharp = if self.set.contains(x) { 1.0 } else { 0.0 };
                    weight(x) * (sharp - self.value(x)).abs()
                };
                total += integrate(f, w[0], w[1], 1e-13).value;
            }
        }
        total
    }
}

// ∫_a^b e^{-u²} du/√π with the erfc forms where they lose less precision.
fn interval_mass(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        0.5 * (libm::erfc(a) - libm::erfc(b))
    } else if b <= 0.0 {
        0.5 * (libm::erfc(-b) - libm::erfc(-a))
    } else {
        0.5 * (libm::erf(b) - libm::erf(a))
    }
}

/// Free-function form of [`SmearedIndicator::value`].
pub fn smeared_chi(ind: &SmearedIndicator, x: f64) -> f64 {
    ind.value(x)
}

/// Error incurred by replacing `χ_U` with `χ_U^δ` in a single-time probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmearingReport {
    /// `∫ρ(x)|χ_U − χ_U^δ| dx`.
    pub error: f64,
    /// `p(U)` for the sharp set.
    pub probability: f64,
    /// `c′·(δ/L)·p(U)` with `c′ = 1`.
    pub bound: f64,
    pub c_prime: f64,
}

/// Weighted smearing error for the position density of `rho`.
pub fn smearing_relative_error(
    ind: &SmearedIndicator,
    rho: &DensityOperator,
) -> Result<SmearingReport> {
    if ind.set.is_empty() {
        return Err(Error::EmptySet);
    }
    let grid = rho.grid();
    let density = rho.position_density();
    let probability = rho.probability_of_set(&ind.set);
    let error = ind.weighted_deviation(|x| grid.interpolate(&density, x).max(0.0));
    let c_prime = 1.0;
    let bound = c_prime * ind.delta / ind.set.total_length() * probability;
    Ok(SmearingReport { error, probability, bound, c_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{Grid, WaveFunction};

    #[test]
    fn deep_inside_and_boundary() {
        let ind = SmearedIndicator::gaussian(SampleSet::interval(-50.0, 50.0).unwrap(), 0.1)
            .unwrap();
        assert!((ind.value(0.0) - 1.0).abs() < 1e-6);
        assert!((ind.value(50.0) - 0.5).abs() < 1e-6);
        assert!((ind.value(-50.0) - 0.5).abs() < 1e-6);
        assert!(ind.value(60.0) < 1e-6);
    }

    #[test]
    fn l1_constant_is_order_unity() {
        let ind = SmearedIndicator::gaussian(SampleSet::interval(0.0, 1.0).unwrap(), 0.01)
            .unwrap();
        let c = ind.l1_deviation() / 0.01;
        let expected = 2.0 * 2.0 / (2.0 * PI).sqrt();
        assert!((c - expected).abs() < 1e-6, "c = {c}");
    }

    #[test]
    fn margin_without_mass() {
        let g = Grid::new(256, -20.0, 20.0).unwrap();
        let psi = WaveFunction::gaussian(g, 0.0, 0.5, 0.0).unwrap();
        let rho = psi.density_operator();
        let ind = SmearedIndicator::gaussian(SampleSet::interval(-10.0, 10.0).unwrap(), 0.05)
            .unwrap();
        let r = smearing_relative_error(&ind, &rho).unwrap();
        assert!(r.error < 1e-8);
        assert!((r.probability - 1.0).abs() < 1e-9);
    }

    #[test]
    fn broad_state_error_scales_with_delta() {
        let g = Grid::new(512, -40.0, 40.0).unwrap();
        let psi = WaveFunction::gaussian(g, 0.0, 4.0, 0.0).unwrap();
        let rho = psi.density_operator();
        let delta = 0.02;
        let ind = SmearedIndicator::gaussian(SampleSet::interval(-1.0, 1.0).unwrap(), delta)
            .unwrap();
        let r = smearing_relative_error(&ind, &rho).unwrap();
        assert!(r.error / r.probability < 2.0 * 0.01, "{r:?}");
        let tiny = SmearedIndicator::gaussian(ind.set.clone(), 1e-6).unwrap();
        assert!(smearing_relative_error(&tiny, &rho).unwrap().error < 1e-6);
    }
}
