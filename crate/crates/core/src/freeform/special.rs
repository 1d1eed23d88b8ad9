//! Sine integral and Fresnel integrals.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::C64;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;

/// `Si(x) = ∫₀ˣ sin(u)/u du`.
///
/// Power series for `|x| < 4`; beyond that the continued fraction for the
/// exponential integral `E₁(ix)` (modified Lentz), which stays accurate to
/// round-off where a truncated asymptotic series would not.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x < 4.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 0u32;
        loop {
            k += 1;
            let kf = k as f64;
            term *= -x2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            let add = term / (2.0 * kf + 1.0);
            sum += add;
            if add.abs() < EPS * sum.abs() {
                break;
            }
        }
        return sum;
    }
    FRAC_PI_2 + exp_integral_tail(x).im
}

/// `Ci(x) = γ + ln x + ∫₀ˣ (cos u − 1)/u du` for `x > 0`.
pub fn cosine_integral(x: f64) -> f64 {
    assert!(x > 0.0, "Ci is defined for positive arguments");
    if x < 4.0 {
        const EULER: f64 = 0.577_215_664_901_532_9;
        let x2 = x * x;
        let mut term = 1.0;
        let mut sum = 0.0;
        let mut k = 0u32;
        loop {
            k += 1;
            let kf = k as f64;
            term *= -x2 / ((2.0 * kf - 1.0) * (2.0 * kf));
            let add = term / (2.0 * kf);
            sum += add;
            if add.abs() < EPS * sum.abs().max(1e-300) {
                break;
            }
        }
        return EULER + x.ln() + sum;
    }
    -exp_integral_tail(x).re
}

// E₁(ix)·… arranged so that Ci = −Re h and Si = π/2 + Im h.
fn exp_integral_tail(x: f64) -> C64 {
    let mut b = C64::new(1.0, x);
    let mut c = C64::new(1.0 / FPMIN, 0.0);
    let mut d = C64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..10_000u32 {
        let a = -((i - 1) as f64).powi(2);
        b += C64::new(2.0, 0.0);
        d = C64::new(1.0, 0.0) / (d * a + b);
        c = b + C64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < EPS {
            break;
        }
    }
    h * C64::new(x.cos(), -x.sin())
}

/// Fresnel integrals `(C(x), S(x))` with kernel `cos/sin(πt²/2)`.
pub fn fresnel(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (c, s) = if ax < 1e-300 {
        (0.0, 0.0)
    } else if ax < 1.5 {
        // Power series in t = πx²/2.
        let t = FRAC_PI_2 * ax * ax;
        let mut csum = 0.0;
        let mut ssum = 0.0;
        let mut fact_term = 1.0; // t^k / k!
        let mut k = 0u32;
        loop {
            let kf = k as f64;
            let add = fact_term / (2.0 * kf + 1.0);
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                csum += sign * add;
            } else {
                ssum += sign * add;
            }
            k += 1;
            fact_term *= t / k as f64;
            if add < EPS * (csum.abs() + ssum.abs()) && k > 3 {
                break;
            }
        }
        (csum * ax, ssum * ax)
    } else {
        let pix2 = PI * ax * ax;
        let mut b = C64::new(1.0, -pix2);
        let mut cc = C64::new(1.0 / FPMIN, 0.0);
        let mut d = C64::new(1.0, 0.0) / b;
        let mut h = d;
        let mut n = -1.0f64;
        for _ in 2..10_000 {
            n += 2.0;
            let a = -n * (n + 1.0);
            b += C64::new(4.0, 0.0);
            d = C64::new(1.0, 0.0) / (d * a + b);
            cc = b + C64::new(a, 0.0) / cc;
            let del = cc * d;
            h *= del;
            if (del - 1.0).norm() < EPS {
                break;
            }
        }
        h *= C64::new(ax, -ax);
        let cs = C64::new(0.5, 0.5)
            * (C64::new(1.0, 0.0) - C64::from_polar(1.0, 0.5 * pix2) * h);
        (cs.re, cs.im)
    };
    if x < 0.0 {
        (-c, -s)
    } else {
        (c, s)
    }
}

/// Fresnel sine integral `S(x)`.
pub fn fresnel_s(x: f64) -> f64 {
    fresnel(x).1
}

/// Fresnel cosine integral `C(x)`.
pub fn fresnel_c(x: f64) -> f64 {
    fresnel(x).0
}
