use seqprob_core::freeform::{box_state_two_time, ralt_element, r2free_element, two_slit_marginal, FreeParams};
use seqprob_core::qcore::{free_hamiltonian, Grid, SampleSet, WaveFunction};
use seqprob_core::seqmeas::{
    decoherence_functional, history_probability, sequential_matrix, HistorySpec, PovmKind,
};
use seqprob_core::C64;
use std::f64::consts::PI;

#[test]
fn two_time_kernel_matches_dense_grid() {
    // Box [−32, 32), dx = 1/4. At t = m·L_box·dx/(2π) the lattice velocity
    // cutoff carries the free kernel across exactly one box length.
    let g = Grid::new(256, -32.0, 32.0).unwrap();
    let t = g.length() * g.dx() / (2.0 * PI);
    let h = free_hamiltonian(g, 1.0).unwrap();
    let u1 = SampleSet::interval(-2.0, 2.0).unwrap();
    let u2 = SampleSet::interval(-1.0, 1.0).unwrap();
    let p = FreeParams::new(1.0, t, 0.5).unwrap();
    let hist = HistorySpec::new(vec![(0.0, u1.clone()), (t, u2.clone())]).unwrap();
    let m = sequential_matrix(&hist, &h, &PovmKind::GaussianSqrt { delta: 0.5 }).unwrap();
    for (i, j) in [(124, 124), (120, 131), (127, 129), (110, 140), (133, 126)] {
        let grid_value = m[(i, j)] / g.dx();
        let closed = ralt_element(g.x(i), g.x(j), &u1, &u2, &p).unwrap();
        let quad = r2free_element(g.x(i), g.x(j), &u1, &u2, &p).unwrap();
        assert!((grid_value - closed).norm() < 1e-4, "({i},{j}): {grid_value} vs {closed}");
        assert!((quad - closed).norm() < 1e-8);
    }
}

#[test]
fn two_slit_marginal_matches_grid() {
    for &(sigma, sep, t, delta) in &[(1.0, 4.0, 1.0, 0.5), (0.7, 3.0, 0.5, 0.25)] {
        let g = Grid::new(256, -16.0, 16.0).unwrap();
        let h = free_hamiltonian(g, 1.0).unwrap();
        let rho = WaveFunction::two_slit(g, sigma, sep).unwrap().density_operator();
        let u = SampleSet::interval(0.5, 2.0).unwrap();
        let hist = HistorySpec::new(vec![(0.0, SampleSet::full()), (t, u.clone())]).unwrap();
        let m = sequential_matrix(&hist, &h, &PovmKind::GaussianSqrt { delta }).unwrap();
        let p = FreeParams::new(1.0, t, delta).unwrap().with_slits(sigma, sep).unwrap();
        let closed = two_slit_marginal(&u, &p).unwrap();
        assert!((rho.probability(&m) - closed).abs() < 1e-3);
    }
}

#[test]
fn box_state_half_lines_match_propagator_evaluation() {
    // Half-width L = 4 on a dense grid; r = t/(mL²).
    let g = Grid::new(512, -32.0, 32.0).unwrap();
    let h = free_hamiltonian(g, 1.0).unwrap();
    let psi = WaveFunction::from_fn(g, |x| C64::new(if x.abs() < 4.0 { 1.0 } else { 0.0 }, 0.0))
        .unwrap();
    let rho = psi.density_operator();
    for &r in &[0.1, 0.5] {
        let t = r * 16.0;
        let pp = HistorySpec::new(vec![(0.0, SampleSet::above(0.0)), (t, SampleSet::above(0.0))])
            .unwrap();
        let mp = pp.with_set(0, SampleSet::below(0.0)).unwrap();
        let kind = PovmKind::DiscreteSpectral;
        let p_pp = history_probability(&rho, &pp, &h, &kind).unwrap();
        let b = 2.0 * decoherence_functional(&rho, &pp, &mp, &h, &kind).unwrap().value.re;
        let (direct_p, direct_b) = box_state_two_time(r).unwrap();
        assert!((p_pp - direct_p).abs() < 5e-3, "r={r}: {p_pp} vs {direct_p}");
        assert!((b - direct_b).abs() < 1e-4, "r={r}: {b} vs {direct_b}");
    }
}
