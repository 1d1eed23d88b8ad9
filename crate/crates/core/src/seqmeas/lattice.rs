//! Sharp lattice-cell measurements evaluated on wave functions.
//!
//! A measurement of resolution δ at `t₁` projects onto one of the cells
//! `[kδ, (k+1)δ)`. Merging neighbouring cells into `2δ` cells changes the
//! two-time probability by the interference term between the halves, which
//! is what [`sharp_cell_probabilities`] tracks alongside both probabilities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PovmKind;
use crate::fourier::{wavenumbers, FourierPair};
use crate::qcore::{evolve, DensityOperator, LinearOperator, SampleSet, Spectrum, WaveFunction};
use crate::{Error, Result, C64};

/// Two-time probabilities at resolutions δ and 2δ with their difference
/// split into interference terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellDecomposition {
    pub delta: f64,
    pub p_delta: f64,
    pub p_2delta: f64,
    /// `Σ 2 Re d_δ` over all merged cells.
    pub interference: f64,
    /// `|p_2δ − p_δ − interference|`, zero up to round-off.
    pub identity_gap: f64,
}

impl CellDecomposition {
    /// `|p_δ − p_2δ| / p_δ`.
    pub fn relative_sensitivity(&self) -> f64 {
        (self.p_delta - self.p_2delta).abs() / self.p_delta
    }
}

fn check_on_lattice(set: &SampleSet, step: f64) -> Result<()> {
    for i in set.intervals() {
        for e in [i.lo, i.hi] {
            if e.is_finite() && ((e / step) - (e / step).round()).abs() > 1e-9 {
                return Err(Error::InvalidSet(format!("endpoint {e} is not a multiple of {step}")));
            }
        }
    }
    Ok(())
}

struct FreeStepper {
    fft: FourierPair,
    phases: Vec<C64>,
}

impl FreeStepper {
    fn new(ham: &LinearOperator, t: f64) -> Result<Self> {
        let n = ham.grid().n_points();
        let energies = match ham.spectrum() {
            Some(Spectrum::Fourier(e)) => e.clone(),
            _ => {
                return Err(Error::InvalidParameter(
                    "lattice evaluation needs a Fourier-diagonal Hamiltonian".into(),
                ))
            }
        };
        debug_assert_eq!(energies.len(), wavenumbers(n, ham.grid().dx()).len());
        Ok(Self {
            fft: FourierPair::new(n),
            phases: energies.iter().map(|e| C64::from_polar(1.0, -e * t)).collect(),
        })
    }

    fn apply(&self, v: &mut [C64]) {
        self.fft.apply_diagonal(v, &self.phases);
    }
}

/// `p_δ(U₁,t₁; U₂,t₂)`, `p_2δ` and the interference decomposition for a
/// Fourier-diagonal Hamiltonian. `U₁` must be a union of `2δ` cells.
pub fn sharp_cell_probabilities(
    psi: &WaveFunction,
    ham: &LinearOperator,
    delta: f64,
    u1: &SampleSet,
    t1: f64,
    u2: &SampleSet,
    t2: f64,
) -> Result<CellDecomposition> {
    let grid = *psi.grid();
    grid.ensure_same(ham.grid())?;
    PovmKind::SharpGrid { delta }.validate(&grid)?;
    check_on_lattice(u1, 2.0 * delta)?;
    if !(t2 > t1) {
        return Err(Error::InvalidHistory("t2 must exceed t1".into()));
    }
    let psi1 = evolve(psi, ham, t1)?;
    let stepper = FreeStepper::new(ham, t2 - t1)?;
    let chi2 = u2.indicator(&grid);
    let n = grid.n_points();

    // Points of U₁ grouped by 2δ cell, split into their two δ halves.
    let mut pairs: std::collections::BTreeMap<i64, (Vec<usize>, Vec<usize>)> = Default::default();
    for i in 0..n {
        let x = grid.x(i);
        if !u1.contains(x) {
            continue;
        }
        let k = (x / delta).floor() as i64;
        let entry = pairs.entry(k.div_euclid(2)).or_default();
        if k.rem_euclid(2) == 0 {
            entry.0.push(i);
        } else {
            entry.1.push(i);
        }
    }
    let dx = grid.dx();
    let amps = psi1.amplitudes();
    let propagate = |idx: &[usize]| -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); n];
        for &i in idx {
            v[i] = amps[i];
        }
        stepper.apply(&mut v);
        for (a, c) in v.iter_mut().zip(&chi2) {
            *a *= *c;
        }
        v
    };
    let pair_list: Vec<_> = pairs.into_values().collect();
    // Collected before summing so the result does not depend on the thread
    // count.
    let parts: Vec<(f64, f64, f64)> = pair_list
        .par_iter()
        .map(|(lo, hi)| {
            let a = propagate(lo);
            let b = propagate(hi);
            let mut na = 0.0;
            let mut nb = 0.0;
            let mut nab = 0.0;
            let mut cross = C64::new(0.0, 0.0);
            for (x, y) in a.iter().zip(&b) {
                na += x.norm_sqr();
                nb += y.norm_sqr();
                nab += (x + y).norm_sqr();
                cross += y.conj() * x;
            }
            ((na + nb) * dx, nab * dx, 2.0 * cross.re * dx)
        })
        .collect();
    let (p_delta, p_2delta, interference) =
        parts.iter().fold((0.0, 0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(CellDecomposition {
        delta,
        p_delta,
        p_2delta,
        interference,
        identity_gap: (p_2delta - p_delta - interference).abs(),
    })
}

/// `d_δ(x₁+δ/2, x₁−δ/2, t₁; U₂, t₂) = Tr(Q P_{x₁+δ/2} ρ(t₁) P_{x₁−δ/2})`
/// with `Q = e^{iH(t₂−t₁)} P_{U₂} e^{−iH(t₂−t₁)}`. `x₁` is the shared edge of
/// the two δ cells.
pub fn interference_term(
    rho: &DensityOperator,
    x1: f64,
    delta: f64,
    u2: &SampleSet,
    t1: f64,
    t2: f64,
    ham: &LinearOperator,
) -> Result<C64> {
    let grid = *rho.grid();
    grid.ensure_same(ham.grid())?;
    PovmKind::SharpGrid { delta }.validate(&grid)?;
    check_on_lattice(&SampleSet::interval(x1, x1 + delta)?, delta)?;
    let upper = SampleSet::interval(x1, x1 + delta)?.indicator(&grid);
    let lower = SampleSet::interval(x1 - delta, x1)?.indicator(&grid);
    let rho1 = evolve(rho, ham, t1)?;
    let q = crate::qcore::heisenberg(
        &crate::linalg::real_diagonal(&u2.indicator(&grid)),
        ham,
        t2 - t1,
    )?;
    // Tr(Q P_a ρ P_b) = Σ_{i∈b, j∈a} Q_ij ρ_ji
    let n = grid.n_points();
    let mut acc = C64::new(0.0, 0.0);
    for i in (0..n).filter(|&i| lower[i] > 0.0) {
        for j in (0..n).filter(|&j| upper[j] > 0.0) {
            acc += q[(i, j)] * rho1.matrix()[(j, i)];
        }
    }
    Ok(acc * grid.dx())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{free_hamiltonian, potential_hamiltonian, Grid};
    use crate::seqmeas::{povm_probability, HistorySpec};

    #[test]
    fn identity_holds_and_matches_dense_povm() {
        let g = Grid::new(128, -8.0, 8.0).unwrap();
        let h = free_hamiltonian(g, 1.0).unwrap();
        let psi = WaveFunction::two_slit(g, 0.7, 3.0).unwrap();
        let delta = 0.25;
        let u1 = SampleSet::interval(0.0, 4.0).unwrap();
        let u2 = SampleSet::above(0.0);
        let r = sharp_cell_probabilities(&psi, &h, delta, &u1, 0.0, &u2, 0.6).unwrap();
        assert!(r.identity_gap < 1e-12);
        let hist = HistorySpec::new(vec![(0.0, u1.clone()), (0.6, u2.clone())]).unwrap();
        let rho = psi.density_operator();
        let dense = povm_probability(&rho, &hist, &h, &PovmKind::SharpGrid { delta }).unwrap();
        assert!((dense - r.p_delta).abs() < 1e-10);
        let dense2 = povm_probability(&rho, &hist, &h, &PovmKind::SharpGrid { delta: 2.0 * delta })
            .unwrap();
        assert!((dense2 - r.p_2delta).abs() < 1e-10);
        let d = interference_term(&rho, 1.0, delta, &u2, 0.0, 0.6, &h).unwrap();
        assert!(d.norm() > 1e-6);
    }

    #[test]
    fn commuting_interference_vanishes() {
        let g = Grid::new(64, -8.0, 8.0).unwrap();
        let h = potential_hamiltonian(g, |x| x * x);
        let rho = WaveFunction::gaussian(g, 0.0, 1.0, 0.0).unwrap().density_operator();
        let d = interference_term(&rho, 0.0, 0.5, &SampleSet::above(0.0), 0.0, 1.0, &h).unwrap();
        assert!(d.norm() < 1e-10);
    }
}
