use super::{DensityOperator, Grid, WaveFunction};
use crate::fourier::{wavenumbers, FourierPair};
use crate::linalg::{hermitian_eigen, hermiticity_defect, identity_defect, psd_sqrt, reassemble};
use crate::{CMatrix, Error, Result, C64, INVARIANT_TOL};

/// How an operator is diagonalised, when known.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    /// Diagonal in the discrete Fourier basis; values in DFT mode order.
    Fourier(Vec<f64>),
    /// Diagonal in the position basis.
    Diagonal(Vec<f64>),
    /// Dense eigendecomposition, eigenvalues ascending.
    Eigen { values: Vec<f64>, vectors: CMatrix },
}

/// Operator on a grid with flags verified at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    grid: Grid,
    matrix: CMatrix,
    hermitian: bool,
    unitary: bool,
    positive: bool,
    spectrum: Option<Spectrum>,
}

impl LinearOperator {
    /// Wraps a matrix, checking Hermiticity, unitarity and positivity to
    /// [`INVARIANT_TOL`].
    pub fn new(grid: Grid, matrix: CMatrix) -> Result<Self> {
        let n = grid.n_points();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::GridMismatch);
        }
        let hermitian = hermiticity_defect(&matrix) < INVARIANT_TOL;
        let unitary = identity_defect(&(matrix.adjoint() * &matrix)) < INVARIANT_TOL;
        let (positive, spectrum) = if hermitian {
            let (values, vectors) = hermitian_eigen(&matrix);
            (values[0] >= -INVARIANT_TOL, Some(Spectrum::Eigen { values, vectors }))
        } else {
            (false, None)
        };
        Ok(Self { grid, matrix, hermitian, unitary, positive, spectrum })
    }

    /// Real diagonal operator in the position basis.
    pub fn diagonal(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::GridMismatch);
        }
        let matrix = crate::linalg::real_diagonal(&values);
        let positive = values.iter().all(|&v| v >= -INVARIANT_TOL);
        let unitary = values.iter().all(|&v| (v.abs() - 1.0).abs() < INVARIANT_TOL);
        Ok(Self {
            grid,
            matrix,
            hermitian: true,
            unitary,
            positive,
            spectrum: Some(Spectrum::Diagonal(values)),
        })
    }

    pub fn identity(grid: Grid) -> Self {
        Self::diagonal(grid, vec![1.0; grid.n_points()]).expect("sizes agree")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn spectrum(&self) -> Option<&Spectrum> {
        self.spectrum.as_ref()
    }

    /// Eigenvalues, ascending, for Hermitian operators.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut v = match &self.spectrum {
            Some(Spectrum::Fourier(e)) | Some(Spectrum::Diagonal(e)) => e.clone(),
            Some(Spectrum::Eigen { values, .. }) => values.clone(),
            None => return Err(Error::NotHermitian(hermiticity_defect(&self.matrix))),
        };
        v.sort_by(f64::total_cmp);
        Ok(v)
    }

    /// True when the operator is diagonal in position, so it commutes with
    /// every position projector.
    pub fn commutes_with_position(&self) -> bool {
        matches!(self.spectrum, Some(Spectrum::Diagonal(_)))
    }

    fn require_hermitian(&self) -> Result<&Spectrum> {
        match (&self.spectrum, self.hermitian) {
            (Some(s), true) => Ok(s),
            _ => Err(Error::NotHermitian(hermiticity_defect(&self.matrix))),
        }
    }

    /// Matrix of `e^{−iHt}`.
    pub fn propagator(&self, t: f64) -> Result<CMatrix> {
        let n = self.grid.n_points();
        Ok(match self.require_hermitian()? {
            Spectrum::Fourier(energies) => {
                let fft = FourierPair::new(n);
                let mut col = vec![C64::new(0.0, 0.0); n];
                col[0] = C64::new(1.0, 0.0);
                let phases: Vec<C64> =
                    energies.iter().map(|e| C64::from_polar(1.0, -e * t)).collect();
                fft.apply_diagonal(&mut col, &phases);
                circulant(&col)
            }
            Spectrum::Diagonal(v) => {
                let mut m = CMatrix::zeros(n, n);
                for (i, e) in v.iter().enumerate() {
                    m[(i, i)] = C64::from_polar(1.0, -e * t);
                }
                m
            }
            Spectrum::Eigen { values, vectors } => {
                let phases: Vec<C64> =
                    values.iter().map(|e| C64::from_polar(1.0, -e * t)).collect();
                reassemble(&phases, vectors)
            }
        })
    }

    /// Applies `e^{−iHt}` to a vector of amplitudes.
    pub fn apply_propagator(&self, amps: &[C64], t: f64) -> Result<Vec<C64>> {
        Ok(match self.require_hermitian()? {
            Spectrum::Fourier(energies) => {
                let fft = FourierPair::new(amps.len());
                let phases: Vec<C64> =
                    energies.iter().map(|e| C64::from_polar(1.0, -e * t)).collect();
                let mut out = amps.to_vec();
                fft.apply_diagonal(&mut out, &phases);
                out
            }
            Spectrum::Diagonal(v) => {
                amps.iter().zip(v).map(|(a, e)| a * C64::from_polar(1.0, -e * t)).collect()
            }
            Spectrum::Eigen { .. } => {
                let u = self.propagator(t)?;
                let v = nalgebra::DVector::from_column_slice(amps);
                (u * v).iter().copied().collect()
            }
        })
    }
}

fn circulant(col: &[C64]) -> CMatrix {
    let n = col.len();
    CMatrix::from_fn(n, n, |i, j| col[(i + n - j) % n])
}

/// Kinetic energy `p²/2m`, diagonal in the discrete Fourier modes.
pub fn free_hamiltonian(grid: Grid, mass: f64) -> Result<LinearOperator> {
    let n = grid.n_points();
    if n < 8 {
        return Err(Error::GridTooSmall(n));
    }
    if !(mass > 0.0) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    let energies: Vec<f64> =
        wavenumbers(n, grid.dx()).iter().map(|k| k * k / (2.0 * mass)).collect();
    let fft = FourierPair::new(n);
    let mut col = vec![C64::new(0.0, 0.0); n];
    col[0] = C64::new(1.0, 0.0);
    let mult: Vec<C64> = energies.iter().map(|&e| C64::new(e, 0.0)).collect();
    fft.apply_diagonal(&mut col, &mult);
    let mut matrix = circulant(&col);
    // Hermitise away FFT round-off.
    matrix = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
    Ok(LinearOperator {
        grid,
        matrix,
        hermitian: true,
        unitary: false,
        positive: true,
        spectrum: Some(Spectrum::Fourier(energies)),
    })
}

/// Multiplication by a real potential `V(x_i)`; commutes with position.
pub fn potential_hamiltonian(grid: Grid, potential: impl Fn(f64) -> f64) -> LinearOperator {
    let v = grid.points().into_iter().map(potential).collect();
    LinearOperator::diagonal(grid, v).expect("sizes agree")
}

/// Heisenberg picture `e^{iHt} A e^{−iHt}`.
pub fn heisenberg(a: &CMatrix, h: &LinearOperator, t: f64) -> Result<CMatrix> {
    if t == 0.0 {
        return Ok(a.clone());
    }
    let u = h.propagator(t)?;
    Ok(u.adjoint() * a * u)
}

/// States that can be propagated by `e^{−iHt}`.
pub trait Evolve: Sized {
    fn evolve(&self, h: &LinearOperator, t: f64) -> Result<Self>;
}

impl Evolve for WaveFunction {
    fn evolve(&self, h: &LinearOperator, t: f64) -> Result<Self> {
        self.grid().ensure_same(h.grid())?;
        h.require_hermitian()?;
        if t == 0.0 {
            return Ok(self.clone());
        }
        let amps = h.apply_propagator(self.amplitudes(), t)?;
        WaveFunction::new(*self.grid(), amps)
    }
}

impl Evolve for DensityOperator {
    fn evolve(&self, h: &LinearOperator, t: f64) -> Result<Self> {
        self.grid().ensure_same(h.grid())?;
        h.require_hermitian()?;
        if t == 0.0 {
            return Ok(self.clone());
        }
        let u = h.propagator(t)?;
        let m = &u * self.matrix() * u.adjoint();
        Ok(DensityOperator::from_parts_unchecked(*self.grid(), m))
    }
}

/// `e^{−iHt}` applied to a state (conjugation for density operators).
pub fn evolve<S: Evolve>(state: &S, h: &LinearOperator, t: f64) -> Result<S> {
    state.evolve(h, t)
}

/// Lüders update `ρ → √E ρ √E / Tr(ρE)` together with `Tr(ρE)`.
pub fn luders_reduce(rho: &DensityOperator, e: &LinearOperator) -> Result<(DensityOperator, f64)> {
    rho.grid().ensure_same(e.grid())?;
    if !e.is_hermitian() || !e.is_positive() {
        return Err(Error::NotAnEffect("operator is not positive".into()));
    }
    let top = *e.eigenvalues()?.last().expect("nonempty grid");
    if top > 1.0 + INVARIANT_TOL {
        return Err(Error::NotAnEffect(format!("largest eigenvalue {top} exceeds 1")));
    }
    let p = rho.probability(e.matrix());
    if p < 1e-14 {
        return Err(Error::IncompatibleOutcome(p));
    }
    let s = match e.spectrum() {
        Some(Spectrum::Diagonal(v)) => {
            crate::linalg::real_diagonal(&v.iter().map(|x| x.max(0.0).sqrt()).collect::<Vec<_>>())
        }
        _ => psd_sqrt(e.matrix()),
    };
    let m = &s * rho.matrix() * &s * C64::new(1.0 / p, 0.0);
    Ok((DensityOperator::from_parts_unchecked(*rho.grid(), m), p))
}
