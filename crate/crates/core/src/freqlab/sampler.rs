//! Monte-Carlo sampling of sequential unsharp position measurements, and
//! ensembles whose resolution varies from run to run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::trace::{frequency_trace, FrequencyTrace};
use crate::classical::GridSampler;
use crate::qcore::{gaussian_density, LinearOperator, SampleSet, WaveFunction};
use crate::seqmeas::HistorySpec;
use crate::{Error, Result, C64};

/// One sequential run: outcomes `x_k ~ ∫f_δ(x − y)|ψ_{t_k}(y)|² dy`, each
/// followed by the Lüders update `ψ ↦ √Π_x^δ ψ / ‖·‖` and free evolution to
/// the next slot. The sets of `h` are not used; only its times are.
pub fn sample_sequential_run(
    psi0: &WaveFunction,
    h: &HistorySpec,
    ham: &LinearOperator,
    delta: f64,
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let grid = *psi0.grid();
    grid.ensure_same(ham.grid())?;
    let points = grid.points();
    let mut amps = psi0.amplitudes().to_vec();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(h.len());
    for t in h.times() {
        if t != now {
            amps = ham.apply_propagator(&amps, t - now)?;
            now = t;
        }
        let density: Vec<f64> = amps.iter().map(|a| a.norm_sqr()).collect();
        let y = GridSampler::new(grid, &density).map_err(|_| Error::DegenerateBranch)?.sample(rng);
        let x = y + delta * rng.sample::<f64, _>(StandardNormal);
        let mut norm = 0.0;
        for (a, p) in amps.iter_mut().zip(&points) {
            *a *= gaussian_density(grid.periodic_delta(x, *p), delta).sqrt();
            norm += a.norm_sqr();
        }
        norm *= grid.dx();
        if !(norm > 1e-14) {
            return Err(Error::DegenerateBranch);
        }
        let s = 1.0 / norm.sqrt();
        amps.iter_mut().for_each(|a| *a *= C64::new(s, 0.0));
        out.push(x);
    }
    Ok(out)
}

/// How each run chooses its resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy", deny_unknown_fields)]
pub enum DeltaPolicy {
    Fixed { delta: f64 },
    /// `values[i]` with probability `weights[i]`, redrawn once per block of
    /// `block_len` consecutive runs.
    Mixture { values: Vec<f64>, weights: Vec<f64>, block_len: usize },
}

impl DeltaPolicy {
    fn validate(&self) -> Result<()> {
        match self {
            DeltaPolicy::Fixed { delta } if *delta > 0.0 => Ok(()),
            DeltaPolicy::Mixture { values, weights, block_len }
                if !values.is_empty()
                    && values.len() == weights.len()
                    && values.iter().all(|v| *v > 0.0)
                    && weights.iter().all(|w| *w >= 0.0)
                    && weights.iter().sum::<f64>() > 0.0
                    && *block_len >= 1 =>
            {
                Ok(())
            }
            _ => Err(Error::InvalidParameter(format!("invalid resolution policy {self:?}"))),
        }
    }
}

/// A replayable ensemble of sequential runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub n_runs: usize,
    pub seed: u64,
    pub history: HistorySpec,
    pub policy: DeltaPolicy,
}

// Distinct key for the block-level resolution draws.
const BLOCK_KEY: u64 = 0x00b1_0c4d_e17a;

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_runs == 0 {
            return Err(Error::InvalidParameter("n_runs must be at least 1".into()));
        }
        self.policy.validate()
    }

    /// Resolution used by each run, in run order.
    pub fn deltas(&self) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(match &self.policy {
            DeltaPolicy::Fixed { delta } => vec![*delta; self.n_runs],
            DeltaPolicy::Mixture { values, weights, block_len } => {
                let total: f64 = weights.iter().sum();
                let blocks = self.n_runs.div_ceil(*block_len);
                let per_block: Vec<f64> = (0..blocks)
                    .map(|b| {
                        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ BLOCK_KEY);
                        rng.set_stream(b as u64);
                        let u = rng.random::<f64>() * total;
                        let mut acc = 0.0;
                        for (v, w) in values.iter().zip(weights) {
                            acc += w;
                            if u < acc {
                                return *v;
                            }
                        }
                        *values.last().expect("non-empty")
                    })
                    .collect();
                (0..self.n_runs).map(|i| per_block[i / block_len]).collect()
            }
        })
    }
}

/// Outcome tuples of every run. Run `i` draws from ChaCha stream
/// `(seed, i)`, so the result does not depend on the thread count.
pub fn run_ensemble(spec: &EnsembleSpec, psi0: &WaveFunction, ham: &LinearOperator) -> Result<Vec<Vec<f64>>> {
    let deltas = spec.deltas()?;
    deltas
        .par_iter()
        .enumerate()
        .map(|(i, d)| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(i as u64);
            sample_sequential_run(psi0, &spec.history, ham, *d, &mut rng)
        })
        .collect()
}

/// Frequency trace of the full history over an ensemble.
pub fn mixture_ensemble_trace(
    spec: &EnsembleSpec,
    psi0: &WaveFunction,
    ham: &LinearOperator,
) -> Result<FrequencyTrace> {
    let outcomes = run_ensemble(spec, psi0, ham)?;
    let sets: Vec<SampleSet> = spec.history.entries().iter().map(|e| e.set.clone()).collect();
    frequency_trace(&outcomes, &sets)
}
