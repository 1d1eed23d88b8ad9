//! Sequential measurements of observables with finite spectra.

use crate::linalg::{hermiticity_defect, identity, unitary_from_hermitian};
use crate::{CMatrix, Error, Result, C64};

const FAMILY_TOL: f64 = 1e-9;

/// Checks that `projectors` are Hermitian idempotents, mutually orthogonal
/// and summing to the identity.
pub fn check_projector_family(projectors: &[CMatrix]) -> Result<()> {
    let first = projectors
        .first()
        .ok_or_else(|| Error::NonExclusiveProjectors("empty family".into()))?;
    let n = first.nrows();
    let mut sum = CMatrix::zeros(n, n);
    for (a, p) in projectors.iter().enumerate() {
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::NonExclusiveProjectors(format!("projector {a} has wrong shape")));
        }
        if hermiticity_defect(p) > FAMILY_TOL || (p * p - p).camax() > FAMILY_TOL {
            return Err(Error::NonExclusiveProjectors(format!("element {a} is not a projector")));
        }
        for (b, q) in projectors.iter().enumerate().skip(a + 1) {
            if (p * q).camax() > FAMILY_TOL {
                return Err(Error::NonExclusiveProjectors(format!("elements {a} and {b} overlap")));
            }
        }
        sum += p;
    }
    if (sum - identity(n)).camax() > FAMILY_TOL {
        return Err(Error::NonExclusiveProjectors("family does not sum to the identity".into()));
    }
    Ok(())
}

/// `p(i, 0; j, t) = Tr(Q_j(t) P_i ρ P_i)` with `Q_j(t) = e^{iHt} P_j e^{−iHt}`.
/// The same family is measured at both times.
pub fn discrete_two_time_povm(
    rho: &CMatrix,
    i: usize,
    j: usize,
    ham: &CMatrix,
    t: f64,
    projectors: &[CMatrix],
) -> Result<f64> {
    check_projector_family(projectors)?;
    let (pi, pj) = match (projectors.get(i), projectors.get(j)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidParameter(format!("outcome index ({i}, {j}) out of range"))),
    };
    let u = unitary_from_hermitian(ham, t);
    let q = u.adjoint() * pj * &u;
    Ok((q * pi * rho * pi).trace().re)
}

/// Full table `p(i, 0; j, t)`.
pub fn discrete_two_time_table(
    rho: &CMatrix,
    ham: &CMatrix,
    t: f64,
    projectors: &[CMatrix],
) -> Result<Vec<Vec<f64>>> {
    let k = projectors.len();
    (0..k)
        .map(|i| (0..k).map(|j| discrete_two_time_povm(rho, i, j, ham, t, projectors)).collect())
        .collect()
}

/// Projectors onto the computational basis of `C^n`.
pub fn basis_projectors(n: usize) -> Vec<CMatrix> {
    (0..n)
        .map(|k| {
            let mut p = CMatrix::zeros(n, n);
            p[(k, k)] = C64::new(1.0, 0.0);
            p
        })
        .collect()
}
