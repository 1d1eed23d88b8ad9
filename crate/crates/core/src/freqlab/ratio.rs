//! `2 Re d(α, ¬α) / d(α, α)`: interference with the complement history
//! relative to the history's own weight.

use crate::qcore::{DensityOperator, LinearOperator};
use crate::seqmeas::{decoherence_functional, HistorySpec, PovmKind};
use crate::{Error, Result};

/// The complement `Ωⁿ − U₁×…×U_n` is the disjoint union of the `2ⁿ − 1`
/// products that replace at least one `U_k` by its complement; their
/// decoherence values with `α` are summed.
pub fn decoherence_ratio(
    rho: &DensityOperator,
    h: &HistorySpec,
    ham: &LinearOperator,
    kind: &PovmKind,
) -> Result<f64> {
    let n = h.len();
    if n > 20 {
        return Err(Error::InvalidHistory(format!("{n} slots is too many to expand")));
    }
    let own = decoherence_functional(rho, h, h, ham, kind)?.value.re;
    if !(own >= 1e-14) {
        return Err(Error::IncompatibleOutcome(own));
    }
    let mut cross = 0.0;
    for mask in 1u32..(1 << n) {
        let mut beta = h.clone();
        let mut empty = false;
        for k in 0..n {
            if mask & (1 << k) != 0 {
                let c = h.set(k).complement();
                empty |= c.is_empty();
                beta = beta.with_set(k, c)?;
            }
        }
        if empty {
            continue;
        }
        cross += decoherence_functional(rho, h, &beta, ham, kind)?.value.re;
    }
    Ok(2.0 * cross / own)
}
