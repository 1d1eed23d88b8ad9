//! Second-measurement marginals: the standard sequential rule against the
//! hypothesis that the first measurement leaves them unchanged.

use serde::{Deserialize, Serialize};

use crate::linalg::unitary_from_hermitian;
use crate::seqmeas::discrete::check_projector_family;
use crate::{CMatrix, Error, Result};

/// Marginals of the second measurement, one entry per outcome `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalMarginals {
    /// `Σ_i Tr(ρ P_i Q_j(t) P_i)`.
    pub standard: Vec<f64>,
    /// `Tr(ρ Q_j(t))`.
    pub hypothesis: Vec<f64>,
}

/// Both marginals for the families `first` (measured at 0) and `second`
/// (measured at `t`), with `Q_j(t) = e^{iHt} Q_j e^{−iHt}`.
pub fn condmarg_marginals(
    rho: &CMatrix,
    first: &[CMatrix],
    second: &[CMatrix],
    ham: &CMatrix,
    t: f64,
) -> Result<ConditionalMarginals> {
    check_projector_family(first)?;
    check_projector_family(second)?;
    let d = rho.nrows();
    if rho.ncols() != d || first[0].nrows() != d || second[0].nrows() != d || ham.nrows() != d {
        return Err(Error::InvalidParameter("dimensions of ρ, H and the projectors differ".into()));
    }
    let u = unitary_from_hermitian(ham, t);
    let mut out = ConditionalMarginals { standard: Vec::new(), hypothesis: Vec::new() };
    for q in second {
        let qt = u.adjoint() * q * &u;
        out.standard.push(first.iter().map(|p| (rho * p * &qt * p).trace().re).sum());
        out.hypothesis.push((rho * &qt).trace().re);
    }
    Ok(out)
}

/// Sums of both marginals over the outcome indices in `u2`.
pub fn condmarg_distinction(
    rho: &CMatrix,
    first: &[CMatrix],
    second: &[CMatrix],
    ham: &CMatrix,
    t: f64,
    u2: &[usize],
) -> Result<(f64, f64)> {
    let m = condmarg_marginals(rho, first, second, ham, t)?;
    let mut s = 0.0;
    let mut h = 0.0;
    for &j in u2 {
        if j >= second.len() {
            return Err(Error::InvalidParameter(format!("outcome {j} out of range")));
        }
        s += m.standard[j];
        h += m.hypothesis[j];
    }
    Ok((s, h))
}

/// Stern–Gerlach projectors `(x↑, x↓)` and `(z↑, z↓)`.
pub fn stern_gerlach_projectors() -> (Vec<CMatrix>, Vec<CMatrix>) {
    use crate::C64;
    let c = |v: f64| C64::new(v, 0.0);
    let x_up = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.5), c(0.5), c(0.5)]);
    let x_down = CMatrix::from_row_slice(2, 2, &[c(0.5), c(-0.5), c(-0.5), c(0.5)]);
    let z_up = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
    let z_down = CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)]);
    (vec![x_up, x_down], vec![z_up, z_down])
}
