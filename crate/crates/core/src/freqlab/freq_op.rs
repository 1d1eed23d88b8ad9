//! Frequency operators on `N` copies of a small system.

use serde::{Deserialize, Serialize};

use crate::linalg::{identity, kron, operator_norm};
use crate::{CMatrix, Error, Result, C64};

/// Largest tensor-space dimension built explicitly.
pub const EXPLICIT_CAP: usize = 1024;

fn tensor_dim(d: usize, n_copies: usize) -> Result<usize> {
    let mut dim = 1usize;
    for _ in 0..n_copies {
        dim = dim.checked_mul(d).filter(|v| *v <= EXPLICIT_CAP).ok_or(Error::ExplicitTooLarge(
            d.checked_pow(n_copies as u32).unwrap_or(usize::MAX),
        ))?;
    }
    Ok(dim)
}

/// `Σ_{k₁+…+k_N = n} A_{k₁} ⊗ … ⊗ A_{k_N}` with `A₁ = a`, `A₀ = 1 − a`:
/// the projector onto frequency `n/N` when `a` is a projector, and its
/// unsharp analogue for an effect.
pub fn frequency_operator(n_copies: usize, a: &CMatrix, n: usize) -> Result<CMatrix> {
    let d = a.nrows();
    if a.ncols() != d || d == 0 || d > 4 {
        return Err(Error::InvalidParameter(format!(
            "single-copy space must be square of dimension 1..=4, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if n > n_copies {
        return Err(Error::InvalidParameter(format!("count {n} exceeds {n_copies} copies")));
    }
    tensor_dim(d, n_copies)?;
    let b = identity(d) - a;
    // level[k] holds the sum over m copies with exactly k factors of `a`.
    let mut level: Vec<CMatrix> = vec![CMatrix::from_element(1, 1, C64::new(1.0, 0.0))];
    for m in 1..=n_copies {
        let mut next = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let dim = d.pow(m as u32);
            let mut acc = CMatrix::zeros(dim, dim);
            if k < m {
                acc += kron(&level[k], &b);
            }
            if k > 0 {
                acc += kron(&level[k - 1], a);
            }
            next.push(acc);
        }
        level = next;
    }
    Ok(level.swap_remove(n))
}

/// The frequency PVM element `Π_P(n/N)` as an explicit matrix.
pub fn frequency_pvm(n_copies: usize, p: &CMatrix, n: usize) -> Result<CMatrix> {
    frequency_operator(n_copies, p, n)
}

/// `F = Σ_n (n/N) Π(n/N)` built explicitly.
pub fn frequency_observable(n_copies: usize, p: &CMatrix) -> Result<CMatrix> {
    let dim = tensor_dim(p.nrows(), n_copies)?;
    let mut f = CMatrix::zeros(dim, dim);
    for n in 1..=n_copies {
        f += frequency_pvm(n_copies, p, n)? * C64::new(n as f64 / n_copies as f64, 0.0);
    }
    Ok(f)
}

/// Mean and variance of the frequency observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyStats {
    pub mean: f64,
    pub variance: f64,
}

/// Statistics of `F` in the product state `ψ^{⊗N}`, computed from the
/// binomial law of the count with `p = ⟨ψ|P|ψ⟩`. No tensor space is built.
pub fn frequency_stats_combinatorial(n_copies: usize, p: &CMatrix, psi: &[C64]) -> Result<FrequencyStats> {
    if n_copies == 0 || psi.len() != p.nrows() {
        return Err(Error::InvalidParameter("need N ≥ 1 and a state matching the projector".into()));
    }
    let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    let v = nalgebra::DVector::from_column_slice(psi);
    let q = (v.adjoint() * p * &v)[(0, 0)].re / norm;
    // Binomial weights by the multiplicative recurrence.
    let nn = n_copies as f64;
    let mut mean = 0.0;
    let mut second = 0.0;
    for n in 0..=n_copies {
        let w = binomial(n_copies, n) * q.powi(n as i32) * (1.0 - q).powi((n_copies - n) as i32);
        let f = n as f64 / nn;
        mean += w * f;
        second += w * f * f;
    }
    Ok(FrequencyStats { mean, variance: second - mean * mean })
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The same statistics from the explicit tensor-space operator.
pub fn frequency_stats_explicit(n_copies: usize, p: &CMatrix, psi: &[C64]) -> Result<FrequencyStats> {
    let f = frequency_observable(n_copies, p)?;
    let single = nalgebra::DVector::from_column_slice(psi);
    let single = &single / C64::new(single.norm(), 0.0);
    let mut state = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    let col = CMatrix::from_column_slice(psi.len(), 1, single.as_slice());
    for _ in 0..n_copies {
        state = kron(&state, &col);
    }
    let fpsi = &f * &state;
    let mean = (state.adjoint() * &fpsi)[(0, 0)].re;
    let second = (fpsi.adjoint() * &fpsi)[(0, 0)].re;
    Ok(FrequencyStats { mean, variance: second - mean * mean })
}

/// `K = P_i e^{iHt} P_j e^{−iHt} P_i`, the two-time effect of a finite
/// system.
pub fn two_time_effect(p_i: &CMatrix, p_j: &CMatrix, ham: &CMatrix, t: f64) -> CMatrix {
    let u = crate::linalg::unitary_from_hermitian(ham, t);
    p_i * u.adjoint() * p_j * &u * p_i
}

/// `‖Π_K(n/N) Π_K(n′/N)‖`: how far the frequency POVM built from the
/// effect `K` is from resolving distinct frequencies.
pub fn sequential_frequency_povm_overlap(n_copies: usize, k: &CMatrix, n: usize, n_prime: usize) -> Result<f64> {
    if n == n_prime {
        return Err(Error::InvalidParameter("overlap needs distinct counts".into()));
    }
    let a = frequency_operator(n_copies, k, n)?;
    let b = frequency_operator(n_copies, k, n_prime)?;
    Ok(operator_norm(&(a * b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn p_up() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)])
    }

    fn p_down() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(1.0)])
    }

    fn sigma_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
    }

    fn sigma_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
    }

    #[test]
    fn pvm_is_orthogonal_and_complete() {
        let n_copies = 6;
        let ps: Vec<CMatrix> = (0..=n_copies).map(|n| frequency_pvm(n_copies, &p_up(), n).unwrap()).collect();
        let mut sum = CMatrix::zeros(64, 64);
        for (a, pa) in ps.iter().enumerate() {
            sum += pa;
            assert!((pa * pa - pa).camax() < 1e-12);
            for pb in ps.iter().skip(a + 1) {
                assert!((pa * pb).camax() < 1e-12);
            }
        }
        assert!((sum - identity(64)).camax() < 1e-12);
    }

    #[test]
    fn eigenstate_has_sharp_frequency() {
        let s = frequency_stats_combinatorial(10, &p_up(), &[c(1.0), c(0.0)]).unwrap();
        assert!((s.mean - 1.0).abs() < 1e-15 && s.variance.abs() < 1e-15);
    }

    #[test]
    fn binomial_identities_and_explicit_agreement() {
        let psi = [c(0.3f64.sqrt()), C64::new(0.0, 0.7f64.sqrt())];
        let s = frequency_stats_combinatorial(20, &p_up(), &psi).unwrap();
        assert!((s.mean - 0.3).abs() < 1e-14);
        assert!((s.variance - 0.0105).abs() < 1e-14);
        let a = frequency_stats_combinatorial(8, &p_up(), &psi).unwrap();
        let b = frequency_stats_explicit(8, &p_up(), &psi).unwrap();
        assert!((a.mean - b.mean).abs() < 1e-12 && (a.variance - b.variance).abs() < 1e-12);
        assert!((a.variance - 0.3 * 0.7 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn explicit_cap() {
        assert_eq!(frequency_pvm(11, &p_up(), 3), Err(Error::ExplicitTooLarge(2048)));
    }

    #[test]
    fn rabi_overlap_and_commuting_control() {
        let k = two_time_effect(&p_up(), &p_down(), &sigma_x(), FRAC_PI_4);
        let o = sequential_frequency_povm_overlap(6, &k, 2, 3).unwrap();
        assert!(o > 1e-2, "{o}");
        let k0 = two_time_effect(&p_up(), &p_down(), &sigma_z(), FRAC_PI_4);
        assert!(sequential_frequency_povm_overlap(6, &k0, 2, 3).unwrap() < 1e-10);
        let o4 = sequential_frequency_povm_overlap(4, &k, 1, 2).unwrap();
        let o8 = sequential_frequency_povm_overlap(8, &k, 2, 4).unwrap();
        assert!(o4 > 1e-2 && o8 > 1e-2, "{o4}, {o8}");
    }
}
