//! Two-time half-line detection of a box state: `p₊₊`, the additivity
//! obstruction `b` and their ratio as functions of `r = t/(mL²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::special::{fresnel, sine_integral};
use crate::quad::{integrate, integrate_with_limit};
use crate::{Error, Result, C64};

/// Absolute tolerance of the quadratures.
pub const QUAD_TOL: f64 = 1e-10;

// Past this point in u the integrands are pure oscillating tails and the
// closed-form antiderivatives take over.
const SPLIT: f64 = 40.0;

/// `p₊₊`, `b` and `b/p₊₊` at one value of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppendixD {
    pub r: f64,
    pub p_pp: f64,
    pub b: f64,
    pub ratio: f64,
}

/// Sampled ratio curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCurve {
    pub r_values: Vec<f64>,
    pub p_pp: Vec<f64>,
    pub b: Vec<f64>,
    pub ratio: Vec<f64>,
}

impl RatioCurve {
    pub fn len(&self) -> usize {
        self.r_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_values.is_empty()
    }

    /// Whether the ratio increases strictly along the sampled points.
    pub fn is_monotone_increasing(&self) -> bool {
        self.ratio.windows(2).all(|w| w[1] > w[0])
    }
}

// ∫₀^U (π/2 − Si(u²)) du
fn a_closed(u: f64) -> f64 {
    let s = fresnel(u * (2.0 / PI).sqrt()).1;
    u * (0.5 * PI - sine_integral(u * u)) + (2.0 * PI).sqrt() * s
}

// ∫₀^U (1 − cos u²)/u² du
fn b_closed(u: f64) -> f64 {
    let s = fresnel(u * (2.0 / PI).sqrt()).1;
    if u == 0.0 {
        return 0.0;
    }
    -(1.0 - (u * u).cos()) / u + (2.0 * PI).sqrt() * s
}

fn one_minus_cos_over_sq(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        // 1 − cos u² ≈ u⁴/2
        let u2 = u * u;
        return 0.5 * u2 * (1.0 - u2 * u2 / 12.0);
    }
    let h = (0.5 * u * u).sin();
    2.0 * h * h / (u * u)
}

/// `p₊₊ = (1/π)∫₀¹ Si(z²/r) dz` and `b = (r/π)∫₀¹ (1 − cos(z²/r))/z² dz`.
///
/// With `u = z/√r` both become `√r/π` times integrals over `[0, 1/√r]`,
/// done adaptively up to `u = 40` and in closed form (Fresnel `S`) beyond.
pub fn appendix_d_quantities(r: f64) -> Result<AppendixD> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
    }
    let upper = 1.0 / r.sqrt();
    let cut = upper.min(SPLIT);
    let limit = 20_000;
    let mut a = integrate_with_limit(|u| 0.5 * PI - sine_integral(u * u), 0.0, cut, QUAD_TOL, limit)
        .value;
    let mut bb = integrate_with_limit(one_minus_cos_over_sq, 0.0, cut, QUAD_TOL, limit).value;
    if upper > cut {
        a += a_closed(upper) - a_closed(cut);
        bb += b_closed(upper) - b_closed(cut);
    }
    let scale = r.sqrt() / PI;
    let p_pp = 0.5 - scale * a;
    let b = scale * bb;
    Ok(AppendixD { r, p_pp, b, ratio: b / p_pp })
}

/// Evaluates [`appendix_d_quantities`] on each `r`.
pub fn ratio_curve(r_values: &[f64]) -> Result<RatioCurve> {
    let mut curve = RatioCurve {
        r_values: Vec::with_capacity(r_values.len()),
        p_pp: Vec::with_capacity(r_values.len()),
        b: Vec::with_capacity(r_values.len()),
        ratio: Vec::with_capacity(r_values.len()),
    };
    for &r in r_values {
        let q = appendix_d_quantities(r)?;
        curve.r_values.push(r);
        curve.p_pp.push(q.p_pp);
        curve.b.push(q.b);
        curve.ratio.push(q.ratio);
    }
    Ok(curve)
}

/// `n` logarithmically spaced points between `lo` and `hi`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// `p₊₊` and `b` for the box state evaluated directly from the free
/// propagator, without the reduction to a single sine-integral quadrature.
///
/// With `a = 1/√(πr)` and `E = C + iS` the evolved halves of the box are
/// Fresnel differences `F±(ξ)` in `ξ = x/L`; then `p₊₊ = ¼∫₀^∞|F₊|²` and
/// `b = ½ Re ∫₀^∞ F₊* F₋`. The `1/ξ²` tails past `X` are added from the
/// leading asymptotics of the Fresnel integrals.
pub fn box_state_two_time(r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
    }
    let a = 1.0 / (PI * r).sqrt();
    let e = |s: f64| {
        let (c, s) = fresnel(s);
        C64::new(c, s)
    };
    let f_plus = |xi: f64| e(a * (1.0 - xi)) - e(-a * xi);
    let f_minus = |xi: f64| e(-a * xi) - e(-a * (1.0 + xi));
    let x_end = 1.0 + 200.0 / a;
    let chunk = (2.0 * PI * r).clamp(0.05, 1.0);
    let mut p = 0.0;
    let mut b = 0.0;
    let mut lo = 0.0;
    while lo < x_end {
        let hi = (lo + chunk).min(x_end);
        p += integrate(|xi| f_plus(xi).norm_sqr(), lo, hi, 1e-13).value;
        b += integrate(|xi| (f_plus(xi).conj() * f_minus(xi)).re, lo, hi, 1e-13).value;
        lo = hi;
    }
    let k = 1.0 / (PI * PI * a * a);
    p += k * (1.0 / (x_end - 1.0) + 1.0 / x_end);
    b -= k / x_end;
    Ok((0.25 * p, 0.5 * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn derivative(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-5 * x.max(1.0);
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn closed_forms_are_antiderivatives() {
        for &u in &[0.3, 1.0, 2.2, 5.0, 13.0] {
            let da = derivative(a_closed, u);
            assert!((da - (0.5 * PI - sine_integral(u * u))).abs() < 1e-6, "u={u}");
            let db = derivative(b_closed, u);
            assert!((db - one_minus_cos_over_sq(u)).abs() < 1e-6, "u={u}");
        }
        assert!(a_closed(0.0).abs() < 1e-15);
    }

    #[test]
    fn matches_direct_z_quadrature() {
        // Moderate r, where the z-integrands are tame enough to integrate as
        // written.
        for &r in &[0.05, 0.3, 1.0, 4.0] {
            let p = integrate(|z| sine_integral(z * z / r), 0.0, 1.0, 1e-13).value / PI;
            let b = r / PI
                * integrate(|z| one_minus_cos_over_sq(z / r.sqrt()) / r, 0.0, 1.0, 1e-13).value;
            let q = appendix_d_quantities(r).unwrap();
            assert!((q.p_pp - p).abs() < 1e-9, "r={r}: {} vs {p}", q.p_pp);
            assert!((q.b - b).abs() < 1e-9, "r={r}: {} vs {b}", q.b);
        }
    }

    #[test]
    fn closed_form_everywhere() {
        for &r in &[1e-6f64, 1e-3, 0.01, 0.5, 10.0] {
            let q = appendix_d_quantities(r).unwrap();
            let u = 1.0 / r.sqrt();
            let s = r.sqrt() / PI;
            assert!((q.p_pp - (0.5 - s * a_closed(u))).abs() < 1e-9);
            assert!((q.b - s * b_closed(u)).abs() < 1e-9);
        }
    }

    #[test]
    fn large_r_expansion() {
        let r = 1e3;
        let q = appendix_d_quantities(r).unwrap();
        assert!((q.p_pp * 3.0 * PI * r - 1.0).abs() < 1e-3);
        assert!((q.b * 6.0 * PI * r - 1.0).abs() < 1e-3);
        assert!((q.ratio - 0.5).abs() < 1e-3);
    }

    #[test]
    fn born_limit() {
        let q = appendix_d_quantities(1e-9).unwrap();
        assert!((q.p_pp - 0.5).abs() < 1e-4);
        assert!(appendix_d_quantities(0.0).is_err());
        assert!(appendix_d_quantities(-1.0).is_err());
    }

    #[test]
    fn tolerance_halving_is_stable() {
        let r: f64 = 0.02;
        let u = 1.0 / r.sqrt();
        let coarse = integrate(|x| 0.5 * PI - sine_integral(x * x), 0.0, u, 1e-8).value;
        let fine = integrate(|x| 0.5 * PI - sine_integral(x * x), 0.0, u, 5e-9).value;
        assert!((coarse - fine).abs() < 1e-8);
    }

    #[test]
    fn box_state_born_limit_and_spreading() {
        let (p, b) = box_state_two_time(1e-4).unwrap();
        assert!((p - 0.5).abs() < 5e-3, "{p}");
        assert!(b.abs() < 5e-3, "{b}");
        // Long times: half of the right half stays right, up to O(1/√r).
        let (p, _) = box_state_two_time(50.0).unwrap();
        assert!(p > 0.2 && p < 0.3, "{p}");
    }
}
