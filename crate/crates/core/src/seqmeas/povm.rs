use nalgebra::DMatrix;

use super::{HistorySpec, PovmKind};
use crate::linalg::hermitize;
use crate::qcore::{gaussian_density, DensityOperator, Grid, LinearOperator, SampleSet, SmearedIndicator};
use crate::{CMatrix, Error, Result, INVARIANT_TOL};

/// Positive operator bounded by the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectOperator {
    op: LinearOperator,
}

impl EffectOperator {
    pub fn new(op: LinearOperator) -> Result<Self> {
        if !op.is_hermitian() || !op.is_positive() {
            return Err(Error::NotAnEffect("not positive".into()));
        }
        let top = *op.eigenvalues()?.last().expect("nonempty grid");
        if top > 1.0 + INVARIANT_TOL {
            return Err(Error::NotAnEffect(format!("largest eigenvalue {top} exceeds 1")));
        }
        Ok(Self { op })
    }

    pub fn op(&self) -> &LinearOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn into_inner(self) -> LinearOperator {
        self.op
    }
}

/// Diagonal operator density `Π_x^δ = f_δ(x − x̂)` of the Gaussian POVM, with
/// minimal-image distances on the periodic box. `Π_x dx` is the effect.
pub fn gaussian_povm_element(grid: &Grid, x_center: f64, delta: f64) -> Result<LinearOperator> {
    PovmKind::GaussianSqrt { delta }.validate(grid)?;
    let v = grid
        .points()
        .iter()
        .map(|&x| gaussian_density(grid.periodic_delta(x_center, x), delta))
        .collect();
    LinearOperator::diagonal(*grid, v)
}

fn cell_index(x: f64, delta: f64) -> i64 {
    (x / delta).floor() as i64
}

fn check_cell_aligned(set: &SampleSet, delta: f64) -> Result<()> {
    for i in set.intervals() {
        for e in [i.lo, i.hi] {
            if e.is_finite() && ((e / delta) - (e / delta).round()).abs() > 1e-9 {
                return Err(Error::InvalidSet(format!(
                    "endpoint {e} is not on the δ = {delta} cell lattice"
                )));
            }
        }
    }
    Ok(())
}

/// Values of the effect for `set` at the last slot, on the grid points.
pub(crate) fn final_profile(grid: &Grid, kind: &PovmKind, set: &SampleSet) -> Result<Vec<f64>> {
    Ok(match *kind {
        PovmKind::GaussianSqrt { delta } => {
            let ind = SmearedIndicator::gaussian(set.clone(), delta)?;
            grid.points().iter().map(|&x| ind.value(x)).collect()
        }
        PovmKind::SharpGrid { delta } => {
            check_cell_aligned(set, delta)?;
            set.indicator(grid)
        }
        PovmKind::DiscreteSpectral => set.indicator(grid),
    })
}

/// Schur-product weights implementing `A ↦ ∫_U dy √Π_y A √Π_y` for an inner
/// slot.
pub(crate) fn inner_weights(grid: &Grid, kind: &PovmKind, set: &SampleSet) -> Result<DMatrix<f64>> {
    let n = grid.n_points();
    let x = grid.points();
    Ok(match *kind {
        PovmKind::GaussianSqrt { delta } => {
            let ind = SmearedIndicator::gaussian(set.clone(), delta)?;
            let mut w = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let d = x[i] - x[j];
                    let env = (-(d * d) / (8.0 * delta * delta)).exp();
                    let v = if env < 1e-300 { 0.0 } else { env * ind.value(0.5 * (x[i] + x[j])) };
                    w[(i, j)] = v;
                    w[(j, i)] = v;
                }
            }
            w
        }
        PovmKind::SharpGrid { delta } => {
            check_cell_aligned(set, delta)?;
            let chi = set.indicator(grid);
            let cells: Vec<i64> = x.iter().map(|&p| cell_index(p, delta)).collect();
            DMatrix::from_fn(n, n, |i, j| if cells[i] == cells[j] { chi[i] } else { 0.0 })
        }
        PovmKind::DiscreteSpectral => {
            let chi = set.indicator(grid);
            DMatrix::from_fn(n, n, |i, j| chi[i] * chi[j])
        }
    })
}

/// Dense matrix of the sequential effect `R(U₁,t₁; …; U_n,t_n)` without the
/// eigenvalue validation performed by [`sequential_effect`].
pub fn sequential_matrix(h: &HistorySpec, ham: &LinearOperator, kind: &PovmKind) -> Result<CMatrix> {
    let grid = *ham.grid();
    kind.validate(&grid)?;
    let (h, _) = h.snapped(&grid);
    let n = h.len();
    let times = h.times();
    let last = final_profile(&grid, kind, h.set(n - 1))?;
    let mut m = crate::linalg::real_diagonal(&last);
    for k in (0..n - 1).rev() {
        let u = ham.propagator(times[k + 1] - times[k])?;
        let mut a = u.adjoint() * &m * &u;
        let w = inner_weights(&grid, kind, h.set(k))?;
        a.zip_apply(&w, |v, s| *v *= s);
        m = a;
    }
    if times[0] != 0.0 {
        let u = ham.propagator(times[0])?;
        m = u.adjoint() * &m * &u;
    }
    Ok(hermitize(&m))
}

/// Sequential effect for a history, built from the innermost slot outward by
/// conjugating with the free evolution between slots and applying each
/// slot's weights.
pub fn sequential_effect(h: &HistorySpec, ham: &LinearOperator, kind: &PovmKind) -> Result<EffectOperator> {
    let m = sequential_matrix(h, ham, kind)?;
    EffectOperator::new(LinearOperator::new(*ham.grid(), m)?)
}

/// The square-root Gaussian sequential POVM element.
pub fn sqrt_povm_sequential(h: &HistorySpec, ham: &LinearOperator, delta: f64) -> Result<EffectOperator> {
    sequential_effect(h, ham, &PovmKind::GaussianSqrt { delta })
}

/// Measured probability `Tr(ρ R)` for a sequential measurement of kind `kind`.
pub fn povm_probability(
    rho: &DensityOperator,
    h: &HistorySpec,
    ham: &LinearOperator,
    kind: &PovmKind,
) -> Result<f64> {
    rho.grid().ensure_same(ham.grid())?;
    Ok(rho.probability(&sequential_matrix(h, ham, kind)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity_defect, operator_norm};
    use crate::qcore::{free_hamiltonian, WaveFunction};

    fn setup() -> (Grid, LinearOperator) {
        let g = Grid::new(128, -8.0, 8.0).unwrap();
        (g, free_hamiltonian(g, 1.0).unwrap())
    }

    #[test]
    fn full_history_is_identity() {
        let (_, h) = setup();
        for n in 1..=4 {
            let entries = (0..n).map(|k| (0.3 * k as f64, SampleSet::full())).collect();
            let hist = HistorySpec::new(entries).unwrap();
            for kind in [
                PovmKind::GaussianSqrt { delta: 0.25 },
                PovmKind::SharpGrid { delta: 0.25 },
                PovmKind::DiscreteSpectral,
            ] {
                let r = sequential_matrix(&hist, &h, &kind).unwrap();
                assert!(identity_defect(&r) < 1e-9, "n={n} {kind:?}");
            }
        }
    }

    #[test]
    fn moments_of_gaussian_povm() {
        let g = Grid::new(256, -16.0, 16.0).unwrap();
        let delta = 0.5;
        let mut zeroth = vec![0.0; 256];
        let mut first = vec![0.0; 256];
        for c in 0..256 {
            let xc = g.x(c);
            let p = gaussian_povm_element(&g, xc, delta).unwrap();
            for i in 0..256 {
                let v = p.matrix()[(i, i)].re * g.dx();
                zeroth[i] += v;
                first[i] += v * (g.x(i) + g.periodic_delta(xc, g.x(i)));
            }
        }
        for i in 0..256 {
            assert!((zeroth[i] - 1.0).abs() < 1e-6);
            assert!((first[i] - g.x(i)).abs() < 1e-6);
        }
        assert!(matches!(
            gaussian_povm_element(&g, 0.0, 0.1),
            Err(Error::UnderResolved { .. })
        ));
    }

    #[test]
    fn single_slot_is_smeared_indicator() {
        let (g, h) = setup();
        let delta = 0.5;
        let set = SampleSet::interval(-1.0, 2.0).unwrap();
        let hist = HistorySpec::new(vec![(0.0, set.clone())]).unwrap();
        let r = sqrt_povm_sequential(&hist, &h, delta).unwrap();
        let mut summed = vec![0.0; 128];
        // Riemann sum of Π_x over a fine set of centres inside U.
        let fine = 3000;
        let step = 3.0 / fine as f64;
        for c in 0..fine {
            let xc = -1.0 + (c as f64 + 0.5) * step;
            for (i, s) in summed.iter_mut().enumerate() {
                *s += gaussian_density(g.x(i) - xc, delta) * step;
            }
        }
        for i in 0..128 {
            assert!((r.matrix()[(i, i)].re - summed[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn effects_are_positive_and_bounded() {
        let (_, h) = setup();
        let hist = HistorySpec::new(vec![
            (0.0, SampleSet::above(0.0)),
            (0.5, SampleSet::interval(-1.0, 1.0).unwrap()),
            (1.0, SampleSet::below(0.5)),
        ])
        .unwrap();
        for kind in [PovmKind::GaussianSqrt { delta: 0.25 }, PovmKind::SharpGrid { delta: 0.25 }] {
            let e = sequential_effect(&hist, &h, &kind).unwrap();
            let ev = e.op().eigenvalues().unwrap();
            assert!(ev[0] > -1e-9 && *ev.last().unwrap() < 1.0 + 1e-9);
        }
    }

    #[test]
    fn vanishes_as_delta_shrinks() {
        let g = Grid::new(512, -3.2, 3.2).unwrap();
        let h = free_hamiltonian(g, 1.0).unwrap();
        let hist = HistorySpec::new(vec![
            (0.0, SampleSet::above(0.0)),
            (1.0, SampleSet::interval(0.0, 1.0).unwrap()),
        ])
        .unwrap();
        let mut last = f64::INFINITY;
        for delta in [0.2, 0.1, 0.05, 0.025] {
            let r = sequential_matrix(&hist, &h, &PovmKind::GaussianSqrt { delta }).unwrap();
            let nrm = operator_norm(&r);
            assert!(nrm < last, "delta {delta}: {nrm} !< {last}");
            last = nrm;
        }
    }

    #[test]
    fn last_slot_marginal_is_exact() {
        let (g, h) = setup();
        let rho = WaveFunction::gaussian(g, 0.3, 1.0, 0.5).unwrap().density_operator();
        let kind = PovmKind::GaussianSqrt { delta: 0.25 };
        let two = HistorySpec::new(vec![(0.0, SampleSet::above(0.0)), (1.0, SampleSet::full())]).unwrap();
        let one = HistorySpec::new(vec![(0.0, SampleSet::above(0.0))]).unwrap();
        let a = povm_probability(&rho, &two, &h, &kind).unwrap();
        let b = povm_probability(&rho, &one, &h, &kind).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}
