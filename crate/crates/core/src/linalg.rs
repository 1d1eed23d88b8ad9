//! Dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::DMatrix;

use crate::{CMatrix, C64};

/// Eigenvalues below this are clamped to zero when taking square roots.
pub const SQRT_CLAMP: f64 = 1e-12;

/// Largest entrywise deviation of `m` from its adjoint.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Largest entrywise deviation of `m` from the identity.
pub fn identity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = hermitize(m);
    let eig = sym.symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `(m + m†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    reassemble(&values.iter().map(|&v| C64::new(f(v), 0.0)).collect::<Vec<_>>(), &vectors)
}

/// `V diag(d) V†`.
pub fn reassemble(diag: &[C64], vectors: &CMatrix) -> CMatrix {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for j in 0..n {
        let d = diag[j];
        for i in 0..n {
            scaled[(i, j)] *= d;
        }
    }
    scaled * vectors.adjoint()
}

/// `e^{−iHt}` for a Hermitian matrix `H`.
pub fn unitary_from_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let phases: Vec<C64> = values.iter().map(|v| C64::from_polar(1.0, -v * t)).collect();
    reassemble(&phases, &vectors)
}

/// Positive square root of a positive semidefinite matrix; eigenvalues below
/// [`SQRT_CLAMP`] are clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_function(m, |v| if v < SQRT_CLAMP { 0.0 } else { v.sqrt() })
}

/// Operator 2-norm (largest singular value).
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    if hermiticity_defect(m) < 1e-12 {
        return hermitian_eigenvalues(m)
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0f64, |acc, v| acc.max(*v))
}

/// `‖m − m²‖`, the idempotency defect of an operator.
pub fn idempotency_defect(m: &CMatrix) -> f64 {
    operator_norm(&(m - m * m))
}

/// Sandwich `U† A U`.
pub fn conjugate_by(a: &CMatrix, u: &CMatrix) -> CMatrix {
    u.adjoint() * a * u
}

/// Diagonal matrix from real entries.
pub fn real_diagonal(d: &[f64]) -> CMatrix {
    let n = d.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, &v) in d.iter().enumerate() {
        m[(i, i)] = C64::new(v, 0.0);
    }
    m
}

/// `tr(A B)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Kronecker product of two square complex matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Identity matrix of size `n`.
pub fn identity(n: usize) -> CMatrix {
    DMatrix::identity(n, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_projector_is_itself() {
        let p = real_diagonal(&[1.0, 0.0, 1.0]);
        let s = psd_sqrt(&p);
        assert!((s - &p).norm() < 1e-12);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.7, 0.0),
                C64::new(0.1, 0.2),
                C64::new(0.1, -0.2),
                C64::new(0.3, 0.0),
            ],
        );
        let s = psd_sqrt(&m);
        assert!((&s * &s - &m).norm() < 1e-12);
    }

    #[test]
    fn norm_of_rank_one() {
        let m = real_diagonal(&[0.0, 2.5, -1.0]);
        assert!((operator_norm(&m) - 2.5).abs() < 1e-12);
        assert!((idempotency_defect(&real_diagonal(&[0.5])) - 0.25).abs() < 1e-12);
    }
}
