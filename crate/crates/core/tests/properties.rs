use proptest::prelude::*;

use seqprob_core::apparatus::{resolution_from_device, DeviceState};
use seqprob_core::classical::{markov_path_probability, GridSampler, MarkovKernel};
use seqprob_core::freeform::appendix_d_quantities;
use seqprob_core::freqlab::{nonconvergence_measure, FrequencyTrace};
use seqprob_core::qcore::{
    evolve, free_hamiltonian, luders_reduce, potential_hamiltonian, Grid, LinearOperator, SampleSet,
    SmearedIndicator, WaveFunction,
};
use seqprob_core::seqmeas::{
    additivity_defect, decoherence_functional, history_probability, povm_probability, sequential_matrix,
    HistorySpec, PovmKind,
};
use seqprob_core::C64;

fn grid() -> Grid {
    Grid::new(64, -8.0, 8.0).unwrap()
}

// Cell edges of the 64-point grid are multiples of 1/4.
fn edge() -> impl Strategy<Value = f64> {
    (-24i32..24).prop_map(|i| i as f64 * 0.25)
}

fn interval() -> impl Strategy<Value = SampleSet> {
    (edge(), 1i32..16).prop_map(|(lo, w)| SampleSet::interval(lo, (lo + w as f64 * 0.25).min(8.0)).unwrap())
}

fn wave() -> impl Strategy<Value = WaveFunction> {
    (-2.0f64..2.0, 0.6f64..2.0, -1.5f64..1.5)
        .prop_map(|(x0, s, k0)| WaveFunction::gaussian(grid(), x0, s, k0).unwrap())
}

fn times(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..0.6, n).prop_map(|d| {
        let mut t = 0.0;
        d.iter()
            .map(|v| {
                t += v;
                t
            })
            .collect()
    })
}

fn history(ts: &[f64], sets: &[SampleSet]) -> HistorySpec {
    HistorySpec::new(ts.iter().copied().zip(sets.iter().cloned()).collect()).unwrap()
}

fn ham() -> LinearOperator {
    free_hamiltonian(grid(), 1.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evolution_is_unitary(psi in wave(), t in -5.0f64..5.0) {
        let h = potential_hamiltonian(grid(), |x| 0.1 * x * x);
        prop_assert!((evolve(&psi, &ham(), t).unwrap().norm_squared() - 1.0).abs() < 1e-9);
        prop_assert!((evolve(&psi, &h, t).unwrap().norm_squared() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn luders_probabilities_sum_to_one(psi in wave(), cuts in prop::collection::btree_set(-31i32..32, 1..5)) {
        let rho = psi.density_operator();
        let mut edges: Vec<f64> = cuts.iter().map(|c| *c as f64 * 0.25).collect();
        edges.insert(0, f64::NEG_INFINITY);
        edges.push(f64::INFINITY);
        let mut total = 0.0;
        for w in edges.windows(2) {
            let set = SampleSet::interval(w[0], w[1]).unwrap();
            let e = LinearOperator::diagonal(grid(), set.indicator(&grid())).unwrap();
            total += match luders_reduce(&rho, &e) {
                Ok((_, p)) => p,
                Err(_) => 0.0,
            };
        }
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn smeared_indicators_are_additive_and_monotone(
        lo in -6.0f64..0.0, mid in 0.0f64..3.0, hi in 3.0f64..6.0, delta in 0.05f64..2.0, x in -8.0f64..8.0
    ) {
        let u = SmearedIndicator::gaussian(SampleSet::interval(lo, mid).unwrap(), delta).unwrap();
        let v = SmearedIndicator::gaussian(SampleSet::interval(mid, hi).unwrap(), delta).unwrap();
        let uv = SmearedIndicator::gaussian(SampleSet::interval(lo, hi).unwrap(), delta).unwrap();
        prop_assert!((uv.value(x) - u.value(x) - v.value(x)).abs() < 1e-12);
        prop_assert!(u.value(x) <= uv.value(x) + 1e-15);
    }

    #[test]
    fn probabilities_bounded_and_last_slot_marginal(
        psi in wave(), ts in times(3), a in interval(), b in interval(), c in interval(), delta in 0.5f64..1.5
    ) {
        let rho = psi.density_operator();
        let kind = PovmKind::GaussianSqrt { delta };
        let full = history(&ts, &[a.clone(), b.clone(), c.clone()]);
        let rest = history(&ts, &[a.clone(), b.clone(), c.complement()]);
        let short = history(&ts[..2], &[a, b]);
        let p = povm_probability(&rho, &full, &ham(), &kind).unwrap();
        let q = povm_probability(&rho, &rest, &ham(), &kind).unwrap();
        let s = povm_probability(&rho, &short, &ham(), &kind).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&p));
        prop_assert!((p + q - s).abs() < 1e-6, "{} + {} vs {}", p, q, s);
    }

    #[test]
    fn decoherence_functional_structure(psi in wave(), ts in times(2), a in interval(), b in interval(), split in 1i32..8) {
        let rho = psi.density_operator();
        let kind = PovmKind::DiscreteSpectral;
        let lo = b.intervals()[0].lo;
        let cut = lo + split as f64 * 0.25;
        let b1 = SampleSet::interval(lo, cut).unwrap();
        let b2 = SampleSet::interval(cut, cut + 1.0).unwrap();
        let h1 = history(&ts, &[a.clone(), b1]);
        let h2 = history(&ts, &[a, b2]);
        let d12 = decoherence_functional(&rho, &h1, &h2, &ham(), &kind).unwrap().value;
        let d21 = decoherence_functional(&rho, &h2, &h1, &ham(), &kind).unwrap().value;
        prop_assert!((d12 - d21.conj()).norm() < 1e-12);
        let d11 = decoherence_functional(&rho, &h1, &h1, &ham(), &kind).unwrap().value;
        prop_assert!((d11.re - history_probability(&rho, &h1, &ham(), &kind).unwrap()).abs() < 1e-12);
        prop_assert!(d11.im.abs() < 1e-12);
        let defect = additivity_defect(&rho, &h1, &h2, &ham(), &kind).unwrap();
        prop_assert!((defect - 2.0 * d12.re).abs() < 1e-12);
    }

    #[test]
    fn full_sets_give_identity(n in 1usize..=4, ts in times(4), delta in 0.5f64..2.0) {
        let sets = vec![SampleSet::full(); n];
        let m = sequential_matrix(&history(&ts[..n], &sets), &ham(), &PovmKind::GaussianSqrt { delta }).unwrap();
        let id = seqprob_core::linalg::identity(64);
        prop_assert!((m - id).camax() < 1e-6);
    }

    #[test]
    fn markov_measures_are_compatible_at_every_slot(
        psi in wave(), a in interval(), b in interval(), c in interval(), d in 0.0f64..0.5, slot in 0usize..3
    ) {
        let g = grid();
        let rho0 = psi.position_density();
        let kernels = vec![
            MarkovKernel::heat(g, d, 0.3).unwrap(),
            MarkovKernel::heat(g, d, 0.5).unwrap(),
            MarkovKernel::heat(g, d, 0.2).unwrap(),
        ];
        let sets = vec![a, b, c];
        let mut comp = sets.clone();
        comp[slot] = sets[slot].complement();
        let mut full = sets.clone();
        full[slot] = SampleSet::full();
        let p = markov_path_probability(&rho0, &kernels, &sets).unwrap();
        let q = markov_path_probability(&rho0, &kernels, &comp).unwrap();
        let r = markov_path_probability(&rho0, &kernels, &full).unwrap();
        prop_assert!((p + q - r).abs() < 1e-12);
    }

    #[test]
    fn sampler_quantile_inverts_cdf(psi in wave(), u in 0.001f64..0.999) {
        let s = GridSampler::new(grid(), &psi.position_density()).unwrap();
        prop_assert!((s.cdf(s.quantile(u)) - u).abs() < 1e-9);
    }

    #[test]
    fn frequency_traces_stay_in_unit_interval(hits in prop::collection::vec(any::<bool>(), 2..400)) {
        let t = FrequencyTrace::from_indicators(&hits).unwrap();
        prop_assert!(t.nu.iter().all(|v| (0.0..=1.0).contains(v)));
        let e = nonconvergence_measure(&t, t.n_runs / 2).unwrap();
        prop_assert!((0.0..=1.0).contains(&e));
    }

    #[test]
    fn appendix_ratio_is_bounded(log_r in -2.0f64..2.0) {
        let q = appendix_d_quantities(10f64.powf(log_r)).unwrap();
        prop_assert!((0.0..=0.55).contains(&q.ratio), "{:?}", q);
    }

    #[test]
    fn narrower_device_momentum_means_coarser_resolution(d1 in 0.2f64..1.0, f in 1.1f64..3.0) {
        let a = resolution_from_device(&DeviceState::gaussian(d1, 63).unwrap());
        let b = resolution_from_device(&DeviceState::gaussian(d1 * f, 63).unwrap());
        prop_assert!(b.delta > a.delta);
    }
}

#[test]
fn interference_identity_on_grid_states() {
    // A fixed superposition where the defect is far from zero.
    let g = grid();
    let psi = WaveFunction::from_fn(g, |x| {
        C64::new((-(x - 2.0) * (x - 2.0)).exp() + (-(x + 2.0) * (x + 2.0)).exp(), 0.0)
    })
    .unwrap();
    let h1 = history(&[0.0, 1.5], &[SampleSet::above(0.0), SampleSet::interval(-0.5, 0.5).unwrap()]);
    let h2 = history(&[0.0, 1.5], &[SampleSet::below(0.0), SampleSet::interval(-0.5, 0.5).unwrap()]);
    let defect = additivity_defect(&psi.density_operator(), &h1, &h2, &ham(), &PovmKind::DiscreteSpectral).unwrap();
    assert!(defect.abs() > 1e-3);
}
