//! Relative-frequency traces and the non-convergence estimator.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::qcore::SampleSet;
use crate::{Error, Result};

/// Running relative frequency `ν_n = k_n / n` of one event.
///
/// The cumulative hit counts `k_n` are kept as integers, so every `ν_n` is an
/// exact rational and comparisons between entries never see rounding drift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTrace {
    /// `k_n` for `n = 1, …, n_runs`.
    pub counts: Vec<u64>,
    /// `ν_n` rounded to `f64`.
    pub nu: Vec<f64>,
    pub n_runs: usize,
}

impl FrequencyTrace {
    /// Trace of a stream of event indicators.
    pub fn from_indicators(hits: &[bool]) -> Result<Self> {
        if hits.is_empty() {
            return Err(Error::InvalidParameter("frequency trace needs at least one run".into()));
        }
        let mut counts = Vec::with_capacity(hits.len());
        let mut k = 0u64;
        for h in hits {
            k += u64::from(*h);
            counts.push(k);
        }
        let nu = counts.iter().enumerate().map(|(i, k)| *k as f64 / (i + 1) as f64).collect();
        Ok(Self { counts, nu, n_runs: hits.len() })
    }

    /// Compares `ν_a` and `ν_b` (1-based run numbers) exactly.
    pub fn cmp_runs(&self, a: usize, b: usize) -> Ordering {
        let lhs = self.counts[a - 1] as u128 * b as u128;
        let rhs = self.counts[b - 1] as u128 * a as u128;
        lhs.cmp(&rhs)
    }

    /// Final relative frequency.
    pub fn last(&self) -> f64 {
        self.nu[self.n_runs - 1]
    }

    /// Prefix of the first `n` runs.
    pub fn truncated(&self, n: usize) -> Self {
        let n = n.clamp(1, self.n_runs);
        Self { counts: self.counts[..n].to_vec(), nu: self.nu[..n].to_vec(), n_runs: n }
    }
}

/// `ν_n(U₁,t₁; …)`: the fraction of the first `n` outcome tuples that land
/// in every set.
pub fn frequency_trace(outcomes: &[Vec<f64>], sets: &[SampleSet]) -> Result<FrequencyTrace> {
    let hits: Vec<bool> = outcomes
        .iter()
        .map(|o| {
            if o.len() != sets.len() {
                return Err(Error::InvalidHistory(format!(
                    "outcome with {} slots for {} sets",
                    o.len(),
                    sets.len()
                )));
            }
            Ok(o.iter().zip(sets).all(|(x, s)| s.contains(*x)))
        })
        .collect::<Result<_>>()?;
    FrequencyTrace::from_indicators(&hits)
}

/// Default burn-in: half the trace.
pub fn default_burn(n_runs: usize) -> usize {
    n_runs / 2
}

/// `ε̂ = max_{n > N_burn} ν_n − min_{n > N_burn} ν_n`, the finite-sample
/// stand-in for `sup_{n,m > N} |ν_n − ν_m|`.
pub fn nonconvergence_measure(trace: &FrequencyTrace, n_burn: usize) -> Result<f64> {
    if trace.n_runs < 2 * n_burn || trace.n_runs <= n_burn {
        return Err(Error::TraceTooShort { n: trace.n_runs, burn: n_burn });
    }
    let mut hi = n_burn + 1;
    let mut lo = n_burn + 1;
    for n in n_burn + 2..=trace.n_runs {
        if trace.cmp_runs(n, hi) == Ordering::Greater {
            hi = n;
        }
        if trace.cmp_runs(n, lo) == Ordering::Less {
            lo = n;
        }
    }
    // k_h/h − k_l/l with one rounding.
    let num = trace.counts[hi - 1] as i128 * lo as i128 - trace.counts[lo - 1] as i128 * hi as i128;
    Ok(num as f64 / (hi as f64 * lo as f64))
}

/// Trace of `n` Bernoulli(`p`) trials from a seeded ChaCha stream.
pub fn bernoulli_trace(p: f64, n: usize, seed: u64) -> Result<FrequencyTrace> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < p).collect();
    FrequencyTrace::from_indicators(&hits)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_outcomes() {
        let t = FrequencyTrace::from_indicators(&[true; 50]).unwrap();
        assert!(t.nu.iter().all(|v| *v == 1.0));
        assert_eq!(nonconvergence_measure(&t, 25).unwrap(), 0.0);
    }

    #[test]
    fn alternating_outcomes() {
        let hits: Vec<bool> = (0..1000).map(|i| i % 2 == 0).collect();
        let t = FrequencyTrace::from_indicators(&hits).unwrap();
        for (i, v) in t.nu.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((v - 0.5).abs() <= 0.5 / n + 1e-15);
        }
        let e = nonconvergence_measure(&t, 500).unwrap();
        // ν peaks at n = 501 with 251/501, and ν = 1/2 at every even n.
        assert!((e - 1.0 / (2.0 * 501.0)).abs() < 1e-15);
    }

    #[test]
    fn increments_are_bounded() {
        let t = bernoulli_trace(0.3, 5000, 1).unwrap();
        for n in 1..t.n_runs {
            assert!((t.nu[n] - t.nu[n - 1]).abs() <= 1.0 / (n + 1) as f64 + 1e-15);
        }
        assert!(t.nu.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn short_trace_is_rejected() {
        let t = FrequencyTrace::from_indicators(&[true, false, true]).unwrap();
        assert!(matches!(nonconvergence_measure(&t, 2), Err(Error::TraceTooShort { .. })));
        assert!(FrequencyTrace::from_indicators(&[]).is_err());
    }

    #[test]
    fn bernoulli_estimator_shrinks() {
        let ns = [1_000usize, 10_000, 100_000];
        let reps = 40;
        let mean: Vec<f64> = ns
            .iter()
            .map(|&n| {
                (0..reps)
                    .map(|s| nonconvergence_measure(&bernoulli_trace(0.4, n, s).unwrap(), n / 2).unwrap())
                    .sum::<f64>()
                    / reps as f64
            })
            .collect();
        let x: Vec<f64> = ns.iter().map(|n| *n as f64).collect();
        let slope = log_log_slope(&x, &mean);
        assert!((slope + 0.5).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn trace_of_outcome_tuples() {
        let outcomes = vec![vec![0.5, 1.0], vec![-0.5, 1.0], vec![0.2, -3.0], vec![0.1, 0.1]];
        let t = frequency_trace(&outcomes, &[SampleSet::above(0.0), SampleSet::above(0.0)]).unwrap();
        assert_eq!(t.counts, vec![1, 1, 1, 2]);
    }
}
