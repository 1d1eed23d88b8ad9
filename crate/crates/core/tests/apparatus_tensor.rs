//! Factored pointer amplitudes against a direct simulation on the tensor
//! product of a 32-point system and two 8-point pointers.

use std::f64::consts::PI;

use seqprob_core::apparatus::{impulsive_total_state, ApparatusState, CouplingSpec, DeviceState};
use seqprob_core::qcore::{free_hamiltonian, Grid, WaveFunction};
use seqprob_core::C64;

const NS: usize = 32;
const NP: usize = 8;

#[test]
fn factored_state_matches_tensor_simulation() {
    let grid = Grid::new(NS, -4.0, 4.0).unwrap();
    let ham = free_hamiltonian(grid, 1.0).unwrap();
    let psi = WaveFunction::gaussian(grid, 0.5, 0.8, -1.0).unwrap();

    // Pointer nodes q_a = a·dq; half-integer momenta keep the k-grid
    // symmetric and still give an orthonormal basis on the nodes.
    let dq = 9.0;
    let dk = 2.0 * PI / (NP as f64 * dq);
    let k: Vec<f64> = (0..NP).map(|j| (j as f64 - 3.5) * dk).collect();
    let sigma_k = 1.1 * dk;
    let raw: Vec<C64> =
        k.iter().map(|v| C64::from_polar((-v * v / (4.0 * sigma_k * sigma_k)).exp(), 0.3 * v)).collect();
    let norm = (raw.iter().map(|a| a.norm_sqr()).sum::<f64>() * dk).sqrt();
    let amps: Vec<C64> = raw.iter().map(|a| a / norm).collect();
    let device = DeviceState::new(k.clone(), amps.clone()).unwrap();

    let f = |a: usize, j: usize| C64::from_polar(1.0 / (NP as f64).sqrt(), k[j] * a as f64 * dq);
    let c: Vec<C64> = amps.iter().map(|a| a * dk.sqrt()).collect();
    let pointer0: Vec<C64> = (0..NP).map(|a| (0..NP).map(|j| f(a, j) * c[j]).sum()).collect();

    let (t1, t2) = (0.4, 1.2);
    let psi_t1 = ham.apply_propagator(psi.amplitudes(), t1).unwrap();
    let xs = grid.points();
    let idx = |x: usize, a: usize, b: usize| (x * NP + a) * NP + b;
    let mut s = vec![C64::new(0.0, 0.0); NS * NP * NP];
    for x in 0..NS {
        for a in 0..NP {
            for b in 0..NP {
                s[idx(x, a, b)] = psi_t1[x] * pointer0[a] * pointer0[b];
            }
        }
    }
    // e^{−i x̂ k̂} on one pointer: to the k basis, phase, back.
    let kick = |s: &mut Vec<C64>, second: bool| {
        for x in 0..NS {
            for o in 0..NP {
                let at = |p: usize| if second { idx(x, o, p) } else { idx(x, p, o) };
                let col: Vec<C64> = (0..NP).map(|p| s[at(p)]).collect();
                let kt: Vec<C64> = (0..NP)
                    .map(|j| {
                        (0..NP).map(|p| f(p, j).conj() * col[p]).sum::<C64>()
                            * C64::from_polar(1.0, -k[j] * xs[x])
                    })
                    .collect();
                for p in 0..NP {
                    s[at(p)] = (0..NP).map(|j| f(p, j) * kt[j]).sum();
                }
            }
        }
    };
    kick(&mut s, false);
    for a in 0..NP {
        for b in 0..NP {
            let col: Vec<C64> = (0..NS).map(|x| s[idx(x, a, b)]).collect();
            let moved = ham.apply_propagator(&col, t2 - t1).unwrap();
            for x in 0..NS {
                s[idx(x, a, b)] = moved[x];
            }
        }
    }
    kick(&mut s, true);

    let state =
        impulsive_total_state(&ApparatusState { system: psi, device }, &ham, CouplingSpec { t1, t2 }).unwrap();
    let mut total = 0.0;
    let mut worst = 0.0f64;
    for a in 0..NP {
        for b in 0..NP {
            let amp = state.pointer_amplitude(a as f64 * dq, b as f64 * dq).unwrap();
            let direct: f64 = (0..NS).map(|x| s[idx(x, a, b)].norm_sqr()).sum::<f64>() * grid.dx();
            let factored: f64 = amp.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dx() * dq * dq;
            worst = worst.max((direct - factored).abs());
            total += direct;
        }
    }
    assert!((total - 1.0).abs() < 1e-10, "{total}");
    assert!(worst < 1e-4, "{worst}");
}
