//! Markov path measures on the grid.

use nalgebra::DMatrix;

use crate::qcore::{Grid, SampleSet};
use crate::{Error, Result, INVARIANT_TOL};

/// Transition kernel `g(x, x′)` of one time step, sampled on the grid.
///
/// Columns are indexed by the source point `x′`; `Σ_x g(x, x′)·dx = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovKernel {
    grid: Grid,
    matrix: DMatrix<f64>,
}

impl MarkovKernel {
    pub fn new(grid: Grid, matrix: DMatrix<f64>) -> Result<Self> {
        let n = grid.n_points();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidParameter(format!(
                "kernel is {}x{}, grid has {n} points",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter("kernel entries must be finite and non-negative".into()));
        }
        let k = Self { grid, matrix };
        let defect = k.column_defect();
        if defect > INVARIANT_TOL {
            return Err(Error::NonNormalizedKernel(defect));
        }
        Ok(k)
    }

    /// `δ(x − x′)`: nothing moves.
    pub fn identity(grid: Grid) -> Self {
        let n = grid.n_points();
        Self { grid, matrix: DMatrix::identity(n, n) / grid.dx() }
    }

    /// Periodic heat kernel `e^{tD∂²}`: a Gaussian of variance `2Dt`
    /// summed over images, columns renormalised on the grid.
    pub fn heat(grid: Grid, diffusion: f64, t: f64) -> Result<Self> {
        if !(diffusion >= 0.0 && t >= 0.0 && diffusion.is_finite() && t.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "heat kernel needs D ≥ 0 and t ≥ 0, got D = {diffusion}, t = {t}"
            )));
        }
        let var = 2.0 * diffusion * t;
        if var == 0.0 {
            return Ok(Self::identity(grid));
        }
        let n = grid.n_points();
        let dx = grid.dx();
        let len = grid.length();
        let images = (8.0 * var.sqrt() / len).ceil() as i64 + 1;
        let mut col = vec![0.0; n];
        for (k, c) in col.iter_mut().enumerate() {
            let d = k as f64 * dx;
            *c = (-images..=images)
                .map(|j| {
                    let s = d + j as f64 * len;
                    (-(s * s) / (2.0 * var)).exp()
                })
                .sum();
        }
        let total: f64 = col.iter().sum::<f64>() * dx;
        let matrix = DMatrix::from_fn(n, n, |i, j| col[(i + n - j) % n] / total);
        Self::new(grid, matrix)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Largest `|Σ_x g(x, x′)·dx − 1|` over columns.
    pub fn column_defect(&self) -> f64 {
        let dx = self.grid.dx();
        self.matrix
            .column_iter()
            .map(|c| (c.sum() * dx - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Pushes a density forward one step.
    pub fn apply(&self, density: &[f64]) -> Vec<f64> {
        let dx = self.grid.dx();
        let v = nalgebra::DVector::from_column_slice(density);
        (&self.matrix * v * dx).iter().copied().collect()
    }
}

/// `∫ρ₀(x₀) g₁(x₀,x₁)χ_{U₁}(x₁) g₂(x₁,x₂)χ_{U₂}(x₂)… dx₀…dxₙ` by chained
/// quadrature. `rho0` holds density values at the grid points and
/// `kernels[k]` carries the walk from slot `k − 1` (or time zero) to slot `k`.
pub fn markov_path_probability(
    rho0: &[f64],
    kernels: &[MarkovKernel],
    sets: &[SampleSet],
) -> Result<f64> {
    let first = kernels.first().ok_or_else(|| Error::InvalidHistory("no kernels".into()))?;
    let grid = *first.grid();
    if kernels.len() != sets.len() {
        return Err(Error::InvalidHistory(format!(
            "{} kernels for {} sets",
            kernels.len(),
            sets.len()
        )));
    }
    if rho0.len() != grid.n_points() {
        return Err(Error::InvalidState(format!(
            "{} density values for {} grid points",
            rho0.len(),
            grid.n_points()
        )));
    }
    let mut v = rho0.to_vec();
    for (k, s) in kernels.iter().zip(sets) {
        grid.ensure_same(k.grid())?;
        let defect = k.column_defect();
        if defect > INVARIANT_TOL {
            return Err(Error::NonNormalizedKernel(defect));
        }
        v = k.apply(&v);
        for (vi, chi) in v.iter_mut().zip(s.indicator(&grid)) {
            *vi *= chi;
        }
    }
    Ok(v.iter().sum::<f64>() * grid.dx())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn gaussian_density(grid: &Grid, x0: f64, s: f64) -> Vec<f64> {
        let raw: Vec<f64> =
            grid.points().iter().map(|x| (-(x - x0).powi(2) / (2.0 * s * s)).exp()).collect();
        let z: f64 = raw.iter().sum::<f64>() * grid.dx();
        raw.into_iter().map(|v| v / z).collect()
    }

    #[test]
    fn rejects_unnormalised() {
        let g = Grid::new(16, 0.0, 1.0).unwrap();
        let m = DMatrix::from_element(16, 16, 1.1);
        assert!(matches!(MarkovKernel::new(g, m), Err(Error::NonNormalizedKernel(_))));
        let mut m = DMatrix::from_element(16, 16, 1.0);
        m[(0, 0)] = -0.5;
        assert!(MarkovKernel::new(g, m).is_err());
    }

    #[test]
    fn all_full_sets_give_one() {
        let g = Grid::new(128, -8.0, 8.0).unwrap();
        let rho = gaussian_density(&g, 0.3, 1.0);
        let ks = vec![MarkovKernel::heat(g, 0.5, 0.3).unwrap(); 3];
        let p = markov_path_probability(&rho, &ks, &vec![SampleSet::full(); 3]).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_kernels_reduce_to_intersection() {
        let g = Grid::new(128, -8.0, 8.0).unwrap();
        let rho = gaussian_density(&g, 0.3, 1.0);
        let ks = vec![MarkovKernel::identity(g); 2];
        let a = SampleSet::interval(-1.0, 1.5).unwrap();
        let b = SampleSet::interval(0.0, 3.0).unwrap();
        let p = markov_path_probability(&rho, &ks, &[a.clone(), b.clone()]).unwrap();
        let ind = a.intersect(&b).indicator(&g);
        let direct: f64 = rho.iter().zip(ind).map(|(r, c)| r * c).sum::<f64>() * g.dx();
        assert!((p - direct).abs() < 1e-12);
    }

    #[test]
    fn compatibility_at_every_slot() {
        let g = Grid::new(128, -8.0, 8.0).unwrap();
        let rho = gaussian_density(&g, -0.5, 0.8);
        let ks = vec![MarkovKernel::heat(g, 0.4, 0.5).unwrap(); 3];
        let sets = vec![
            SampleSet::above(0.0),
            SampleSet::interval(-1.0, 1.0).unwrap(),
            SampleSet::below(0.5),
        ];
        for k in 0..3 {
            let mut a = sets.clone();
            a[k] = sets[k].complement();
            let mut full = sets.clone();
            full[k] = SampleSet::full();
            let sum = markov_path_probability(&rho, &ks, &sets).unwrap()
                + markov_path_probability(&rho, &ks, &a).unwrap();
            let marg = markov_path_probability(&rho, &ks, &full).unwrap();
            assert!((sum - marg).abs() < 1e-9);
        }
    }

    #[test]
    fn heat_kernel_matches_random_walk() {
        let g = Grid::new(256, -16.0, 16.0).unwrap();
        let (x0, s0, d, t1, t2) = (-0.5, 1.0, 0.5, 0.4, 1.0);
        let rho = gaussian_density(&g, x0, s0);
        let ks = vec![
            MarkovKernel::heat(g, d, t1).unwrap(),
            MarkovKernel::heat(g, d, t2 - t1).unwrap(),
        ];
        let sets = [SampleSet::above(0.0), SampleSet::above(0.0)];
        let p = markov_path_probability(&rho, &ks, &sets).unwrap();

        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let start = Normal::new(x0, s0).unwrap();
        let step1 = Normal::new(0.0, (2.0 * d * t1).sqrt()).unwrap();
        let step2 = Normal::new(0.0, (2.0 * d * (t2 - t1)).sqrt()).unwrap();
        let mut hits = 0usize;
        for _ in 0..n {
            let x1 = start.sample(&mut rng) + step1.sample(&mut rng);
            let x2 = x1 + step2.sample(&mut rng);
            if x1 >= 0.0 && x2 >= 0.0 {
                hits += 1;
            }
        }
        let mc = hits as f64 / n as f64;
        let se = (mc * (1.0 - mc) / n as f64).sqrt();
        assert!((p - mc).abs() < 3.0 * se, "{p} vs {mc} ± {se}");
    }
}
