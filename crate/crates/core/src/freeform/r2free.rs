//! Kernel of the two-time free-particle effect `R^δ(U₁, 0; U₂, t)`.
//!
//! The first slot uses the square-root Gaussian effects and the last slot the
//! smeared indicator `χ^δ_{U₂}`, matching `PovmKind::GaussianSqrt`.

use std::f64::consts::PI;

use super::FreeParams;
use crate::qcore::{gaussian_density, SampleSet, SmearedIndicator};
use crate::quad::integrate;
use crate::{Error, Result, C64};

const TOL: f64 = 1e-13;

fn bounded_parts(u2: &SampleSet) -> Result<Vec<(f64, f64)>> {
    if !u2.is_bounded() {
        return Err(Error::UnboundedSet);
    }
    Ok(u2.intervals().iter().map(|i| (i.lo, i.hi)).collect())
}

/// `⟨x|R|x′⟩` from the defining double integral, each factor by adaptive
/// quadrature:
///
/// `m/((2π)^{3/2} t δ) ∫_{U₁}dx₁ e^{−(x₁−x̄)²/2δ²} ∫_{U₂}dx₂ e^{i(m/t)(x−x′)(x₂−x̄)}
///  · e^{−½(m²δ²/t² + 1/(4δ²))(x−x′)²}`.
///
/// `U₂` must be bounded; the `x₂` integral of a plane wave over a half-line
/// is only a distribution.
pub fn r2free_element(x: f64, xp: f64, u1: &SampleSet, u2: &SampleSet, p: &FreeParams) -> Result<C64> {
    p.validate()?;
    let parts2 = bounded_parts(u2)?;
    let (m, t, delta) = (p.mass, p.time, p.delta);
    let mid = 0.5 * (x + xp);
    let d = x - xp;
    let reach = 12.0 * delta;
    let mut first = 0.0;
    for i in u1.intervals() {
        let lo = i.lo.max(mid - reach);
        let hi = i.hi.min(mid + reach);
        if hi > lo {
            first += integrate(|y| gaussian_density(y - mid, delta), lo, hi, TOL).value;
        }
    }
    let k = m * d / t;
    let mut re = 0.0;
    let mut im = 0.0;
    for (lo, hi) in parts2 {
        re += integrate(|y| (k * (y - mid)).cos(), lo, hi, TOL).value;
        im += integrate(|y| (k * (y - mid)).sin(), lo, hi, TOL).value;
    }
    let envelope = (-p.envelope_rate() * d * d).exp();
    Ok(C64::new(re, im) * (m / (2.0 * PI * t) * first * envelope))
}

/// `χ̃_U(k) = ∫_U e^{ik(y − c)} dy` for a bounded set.
pub fn indicator_transform(u: &SampleSet, k: f64, c: f64) -> Result<C64> {
    let parts = bounded_parts(u)?;
    let mut acc = C64::new(0.0, 0.0);
    for (lo, hi) in parts {
        let (a, b) = (lo - c, hi - c);
        if (k * (b - a)).abs() < 1e-8 {
            // Second-order expansion about k = 0.
            let mean = 0.5 * (a + b);
            acc += C64::new(1.0, k * mean) * (b - a);
        } else {
            acc += (C64::from_polar(1.0, k * b) - C64::from_polar(1.0, k * a)) / C64::new(0.0, k);
        }
    }
    Ok(acc)
}

/// Factorised form of the same kernel: the Fourier-transformed indicator of
/// `U₂` at `k = m(x−x′)/t`, the smeared indicator of `U₁` at the midpoint and
/// the Gaussian envelope in `x − x′`.
pub fn ralt_element(x: f64, xp: f64, u1: &SampleSet, u2: &SampleSet, p: &FreeParams) -> Result<C64> {
    p.validate()?;
    let (m, t) = (p.mass, p.time);
    let mid = 0.5 * (x + xp);
    let d = x - xp;
    let chi1 = SmearedIndicator::gaussian(u1.clone(), p.delta)?.value(mid);
    let ft = indicator_transform(u2, m * d / t, mid)?;
    Ok(ft * (m / (2.0 * PI * t) * chi1 * (-p.envelope_rate() * d * d).exp()))
}
