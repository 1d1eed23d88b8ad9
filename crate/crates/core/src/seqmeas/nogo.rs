//! Concrete witnesses that the hypotheses of the joint-POVM no-go results
//! fail, and the Kolmogorov compatibility split.

use serde::{Deserialize, Serialize};

use super::{sequential_matrix, HistorySpec, PovmKind};
use crate::linalg::{idempotency_defect, operator_norm, real_diagonal};
use crate::qcore::{heisenberg, DensityOperator, LinearOperator, SampleSet};
use crate::{Error, Result, C64};

/// Operator-level witnesses for a pair of position measurements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NogoReport {
    /// `‖[P_H(t₁)(U₁), P_H(t₂)(U₂)]‖`.
    pub commutator_norm: f64,
    /// `‖M − M²‖` for the sharp-cell marginal `M = R^δ(Ω,t₁; U₂,t₂)`.
    pub marginal_idempotency_defect: f64,
    /// `‖M − P_H(t₂)(U₂)‖`: how far the marginal is from the single-time
    /// projector it would have to equal.
    pub marginal_deviation: f64,
}

/// Evaluates the witnesses for sets `U₁` at `t₁` and `U₂` at `t₂`.
pub fn nogo_witness(
    ham: &LinearOperator,
    t1: f64,
    u1: &SampleSet,
    t2: f64,
    u2: &SampleSet,
    delta: f64,
) -> Result<NogoReport> {
    let grid = *ham.grid();
    let p1 = heisenberg(&real_diagonal(&u1.snap(&grid).set.indicator(&grid)), ham, t1)?;
    let p2 = heisenberg(&real_diagonal(&u2.snap(&grid).set.indicator(&grid)), ham, t2)?;
    // i[A, B] is Hermitian, so its norm comes from an eigen solve.
    let comm = (&p1 * &p2 - &p2 * &p1) * C64::new(0.0, 1.0);
    let hist = HistorySpec::new(vec![(t1, SampleSet::full()), (t2, u2.clone())])?;
    let m = sequential_matrix(&hist, ham, &PovmKind::SharpGrid { delta })?;
    Ok(NogoReport {
        commutator_norm: operator_norm(&comm),
        marginal_idempotency_defect: idempotency_defect(&m),
        marginal_deviation: operator_norm(&(&m - &p2)),
    })
}

/// Result of marginalising one slot of a sequential measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub slot: usize,
    /// `Σ_{V ∈ {U_k, ¬U_k}} p(…, V at t_k, …)`.
    pub lhs: f64,
    /// Probability of the history with slot `k` removed.
    pub rhs: f64,
    pub defect: f64,
}

/// Compares marginalising slot `slot` against the history without it.
pub fn compatibility_check(
    rho: &DensityOperator,
    h: &HistorySpec,
    slot: usize,
    ham: &LinearOperator,
    kind: &PovmKind,
) -> Result<CompatibilityReport> {
    if h.len() < 2 {
        return Err(Error::InvalidHistory("marginalisation needs at least two slots".into()));
    }
    let set = h.set(slot).clone();
    let prob = |hist: &HistorySpec| -> Result<f64> {
        Ok(rho.probability(&sequential_matrix(hist, ham, kind)?))
    };
    let mut lhs = prob(&h.with_set(slot, set.clone())?)?;
    let rest = set.complement();
    if !rest.is_empty() {
        lhs += prob(&h.with_set(slot, rest)?)?;
    }
    let rhs = prob(&h.without_slot(slot)?)?;
    Ok(CompatibilityReport { slot, lhs, rhs, defect: (lhs - rhs).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{free_hamiltonian, potential_hamiltonian, Grid, WaveFunction};

    #[test]
    fn commuting_control_has_no_witness() {
        let g = Grid::new(64, -8.0, 8.0).unwrap();
        let h = potential_hamiltonian(g, |x| 0.3 * x * x);
        let r = nogo_witness(&h, 0.0, &SampleSet::above(0.0), 1.0, &SampleSet::above(0.0), 0.5)
            .unwrap();
        assert!(r.commutator_norm < 1e-9);
        assert!(r.marginal_idempotency_defect < 1e-9);
    }

    #[test]
    fn free_particle_witnesses() {
        let g = Grid::new(128, -3.2, 3.2).unwrap();
        let h = free_hamiltonian(g, 1.0).unwrap();
        let r = nogo_witness(&h, 0.0, &SampleSet::above(0.0), 1.0, &SampleSet::above(0.0), 0.1)
            .unwrap();
        assert!(r.commutator_norm > 0.1, "{r:?}");
        assert!(r.marginal_idempotency_defect > 0.01, "{r:?}");
    }

    #[test]
    fn last_slot_exact_commuting_all_exact() {
        let g = Grid::new(128, -8.0, 8.0).unwrap();
        let rho = WaveFunction::two_slit(g, 0.7, 3.0).unwrap().density_operator();
        let hist = HistorySpec::new(vec![
            (0.0, SampleSet::above(0.0)),
            (0.5, SampleSet::interval(-1.0, 1.0).unwrap()),
            (1.0, SampleSet::above(0.5)),
        ])
        .unwrap();
        let kind = PovmKind::GaussianSqrt { delta: 0.25 };
        let free = free_hamiltonian(g, 1.0).unwrap();
        let last = compatibility_check(&rho, &hist, 2, &free, &kind).unwrap();
        assert!(last.defect < 1e-9);
        let fixed = potential_hamiltonian(g, |x| x);
        for slot in 0..3 {
            let r = compatibility_check(&rho, &hist, slot, &fixed, &PovmKind::DiscreteSpectral).unwrap();
            assert!(r.defect < 1e-9, "slot {slot}: {r:?}");
        }
    }
}
