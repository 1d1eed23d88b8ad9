use serde::{Deserialize, Serialize};

use super::povm::final_profile;
use super::{HistorySpec, PovmKind};
use crate::qcore::{DensityOperator, Grid, LinearOperator};
use crate::{CMatrix, Error, Result, C64};

/// `d(α, β)` together with the pair it was evaluated on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceValue {
    pub value: C64,
    pub pair: (HistorySpec, HistorySpec),
}

// Diagonal of the operator placed at one slot of a class operator.
fn slot_diagonal(grid: &Grid, kind: &PovmKind, set: &crate::qcore::SampleSet) -> Result<Vec<f64>> {
    let v = final_profile(grid, kind, set)?;
    Ok(match kind {
        PovmKind::GaussianSqrt { .. } => v.into_iter().map(|x| x.max(0.0).sqrt()).collect(),
        _ => v,
    })
}

fn scale_rows(m: &mut CMatrix, d: &[f64]) {
    for (i, s) in d.iter().enumerate() {
        m.row_mut(i).scale_mut(*s);
    }
}

/// Dense class operator `U†(t_n) P_n U(t_n − t_{n−1}) ⋯ P_1 U(t_1)`.
pub fn class_matrix(h: &HistorySpec, ham: &LinearOperator, kind: &PovmKind) -> Result<CMatrix> {
    let grid = *ham.grid();
    kind.validate(&grid)?;
    let (h, _) = h.snapped(&grid);
    let times = h.times();
    let mut c = ham.propagator(times[0])?;
    for k in 0..h.len() {
        if k > 0 {
            c = ham.propagator(times[k] - times[k - 1])? * c;
        }
        scale_rows(&mut c, &slot_diagonal(&grid, kind, h.set(k))?);
    }
    Ok(ham.propagator(times[h.len() - 1])?.adjoint() * c)
}

/// Class operator of a history as a checked [`LinearOperator`].
pub fn class_operator(h: &HistorySpec, ham: &LinearOperator, kind: &PovmKind) -> Result<LinearOperator> {
    LinearOperator::new(*ham.grid(), class_matrix(h, ham, kind)?)
}

fn pairing(rho: &DensityOperator, ca: &CMatrix, cb: &CMatrix) -> C64 {
    let m = ca * rho.matrix() * cb.adjoint();
    m.trace() * rho.grid().dx()
}

/// `p(α) = Tr(C_α ρ C_α†)`.
pub fn history_probability(
    rho: &DensityOperator,
    h: &HistorySpec,
    ham: &LinearOperator,
    kind: &PovmKind,
) -> Result<f64> {
    rho.grid().ensure_same(ham.grid())?;
    let c = class_matrix(h, ham, kind)?;
    Ok(pairing(rho, &c, &c).re)
}

/// `d(α, β) = Tr(C_α ρ C_β†)`.
pub fn decoherence_functional(
    rho: &DensityOperator,
    a: &HistorySpec,
    b: &HistorySpec,
    ham: &LinearOperator,
    kind: &PovmKind,
) -> Result<DecoherenceValue> {
    rho.grid().ensure_same(ham.grid())?;
    if !a.same_times(b) {
        return Err(Error::TimeGridMismatch);
    }
    let ca = class_matrix(a, ham, kind)?;
    let cb = class_matrix(b, ham, kind)?;
    Ok(DecoherenceValue { value: pairing(rho, &ca, &cb), pair: (a.clone(), b.clone()) })
}

/// `p(α ∨ β) − p(α) − p(β)` for histories differing in one slot with
/// disjoint sets. The identity with `2 Re d(α, β)` needs class operators that
/// are additive in the sets, so only projector-valued kinds are accepted.
pub fn additivity_defect(
    rho: &DensityOperator,
    a: &HistorySpec,
    b: &HistorySpec,
    ham: &LinearOperator,
    kind: &PovmKind,
) -> Result<f64> {
    if matches!(kind, PovmKind::GaussianSqrt { .. }) {
        return Err(Error::InvalidParameter(
            "additivity defect needs projector-valued slots".into(),
        ));
    }
    let joined = a.join(b)?;
    let ca = class_matrix(a, ham, kind)?;
    let cb = class_matrix(b, ham, kind)?;
    let cj = class_matrix(&joined, ham, kind)?;
    let defect = pairing(rho, &cj, &cj).re - pairing(rho, &ca, &ca).re - pairing(rho, &cb, &cb).re;
    let two_re_d = 2.0 * pairing(rho, &ca, &cb).re;
    debug_assert!((defect - two_re_d).abs() < 1e-10, "{defect} vs {two_re_d}");
    Ok(defect)
}
