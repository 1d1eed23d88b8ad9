//! Projectors averaged over an uncertain measurement time.

use crate::linalg::{idempotency_defect, real_diagonal};
use crate::qcore::{heisenberg, DensityOperator, LinearOperator, SampleSet};
use crate::quad::gauss_legendre_on;
use crate::seqmeas::EffectOperator;
use crate::{CMatrix, Error, Result, C64};

/// Number of Gauss–Legendre nodes in the time average.
pub const TIME_NODES: usize = 8;

/// `Π_U = (1/τ)∫_{t−τ/2}^{t+τ/2} e^{iHs} P_U e^{−iHs} ds` and its spread.
#[derive(Debug, Clone)]
pub struct TimeAveragedProjector {
    pub effect: EffectOperator,
    /// `‖Π − Π²‖`.
    pub spread: f64,
}

impl TimeAveragedProjector {
    /// `Tr ρ(Π − Π²)`, the spread seen by a particular state.
    pub fn state_spread(&self, rho: &DensityOperator) -> f64 {
        let m = self.effect.matrix();
        rho.probability(&(m - m * m))
    }
}

/// Averages the Heisenberg-picture projector onto `u` over a window of width
/// `tau` centred on `center`. `tau = 0` returns the instantaneous projector.
pub fn time_averaged_projector(
    u: &SampleSet,
    center: f64,
    tau: f64,
    ham: &LinearOperator,
) -> Result<TimeAveragedProjector> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau must be non-negative, got {tau}")));
    }
    let grid = *ham.grid();
    let p = real_diagonal(&u.snap(&grid).set.indicator(&grid));
    let avg = if tau == 0.0 {
        heisenberg(&p, ham, center)?
    } else {
        let (nodes, weights) = gauss_legendre_on(TIME_NODES, center - 0.5 * tau, center + 0.5 * tau);
        let n = grid.n_points();
        // Normalise by the weight sum: for tiny τ the mapped interval width
        // carries relative round-off far above the invariant tolerance.
        let total: f64 = weights.iter().sum();
        let mut acc = CMatrix::zeros(n, n);
        for (s, w) in nodes.iter().zip(&weights) {
            acc += heisenberg(&p, ham, *s)? * C64::new(w / total, 0.0);
        }
        acc
    };
    let spread = idempotency_defect(&avg);
    let effect = EffectOperator::new(LinearOperator::new(grid, avg)?)?;
    Ok(TimeAveragedProjector { effect, spread })
}
