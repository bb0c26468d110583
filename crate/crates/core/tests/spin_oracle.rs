mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use bec_metrology::physical::Superposition;
use bec_metrology::spin::{
    evolve, expectation, prepare_product, rotate, single_qubit_purity, Axis, CollectiveHamiltonian, DickeState,
    Protocol,
};
use common::{max_diff, Dense};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn axis(c: char) -> Axis {
    match c {
        'x' => Axis::X,
        'y' => Axis::Y,
        _ => Axis::Z,
    }
}

fn random_state(n: usize, seed: &[f64]) -> DickeState {
    let amps = (0..=n).map(|k| C64::new(seed[(2 * k) % seed.len()], seed[(2 * k + 1) % seed.len()])).collect();
    DickeState::normalized(amps).unwrap()
}

#[test]
fn product_state_matches_dense() {
    for n in 1..=12 {
        let sup = Superposition::from_polar(0.77);
        let d = prepare_product(n, sup).unwrap();
        let dense = Dense::product(n, sup.c1, sup.c2);
        assert!(max_diff(&Dense::from_dicke(&d).amps, &dense.amps) < 1e-12, "N = {n}");
    }
}

#[test]
fn rotations_match_dense() {
    for n in [1, 2, 5, 9, 12] {
        let s = random_state(n, &[0.3, -0.2, 0.9, 0.1, -0.5, 0.4, 0.05]);
        for c in ['x', 'y', 'z'] {
            for theta in [0.0, 0.3, FRAC_PI_2, -2.1, 5.0] {
                let fast = rotate(&s, axis(c), theta);
                let mut dense = Dense::from_dicke(&s);
                dense.rotate(c, theta);
                let diff = max_diff(fast.amplitudes(), &dense.to_dicke_amplitudes());
                assert!(diff < 1e-10, "N = {n}, axis {c}, θ = {theta}: {diff}");
            }
        }
    }
}

#[test]
fn evolutions_match_dense() {
    let n = 10;
    let s = prepare_product(n, Superposition::pi_over_8()).unwrap();
    for (ham, f) in [
        (CollectiveHamiltonian::LinearJz, Box::new(|m: f64| m) as Box<dyn Fn(f64) -> f64>),
        (CollectiveHamiltonian::QuadraticJz2, Box::new(|m: f64| m * m)),
        (CollectiveHamiltonian::EnhancedNJz, Box::new(move |m: f64| n as f64 * m)),
    ] {
        let fast = evolve(&s, ham, 0.37, 1.3).unwrap();
        let mut dense = Dense::from_dicke(&s);
        dense.phase(0.37 * 1.3, f);
        assert!(max_diff(fast.amplitudes(), &dense.to_dicke_amplitudes()) < 1e-12);
    }
}

#[test]
fn moments_and_purity_match_dense() {
    for n in [2, 6, 11] {
        let s = evolve(
            &prepare_product(n, Superposition::pi_over_8()).unwrap(),
            CollectiveHamiltonian::QuadraticJz2,
            0.2,
            1.0,
        )
        .unwrap();
        let dense = Dense::from_dicke(&s);
        for c in ['x', 'y', 'z'] {
            let m = expectation(&s, axis(c));
            let (mean, var) = dense.moments(c);
            assert!((m.mean - mean).abs() < 1e-10, "N = {n}, {c}");
            assert!((m.variance - var).abs() < 1e-10, "N = {n}, {c}");
        }
        assert!((single_qubit_purity(&s) - dense.purity()).abs() < 1e-10);
    }
}

#[test]
fn purity_under_linear_and_quadratic_couplings() {
    for n in [4, 8, 12] {
        for gamma in [0.1, 0.5, 1.3] {
            let lin = Protocol::enhanced(n, 1.0).unwrap();
            let dense = Dense::from_dicke(&lin.evolved(gamma));
            assert!((lin.purity(gamma) - 1.0).abs() < 1e-10);
            assert!((dense.purity() - 1.0).abs() < 1e-10);

            let quad = Protocol::nonlinear_product(n, 1.0).unwrap();
            let p = quad.purity(gamma);
            let dp = Dense::from_dicke(&quad.evolved(gamma)).purity();
            assert!((p - dp).abs() < 1e-10);
            assert!(p < 1.0 - 1e-6, "N = {n}, γ = {gamma}: {p}");
        }
    }
}

#[test]
fn ramsey_readout_through_dense_pulses() {
    let n = 9;
    let p = Protocol::ramsey(n, 1.0).unwrap();
    for gamma in [0.0, 0.4, PI / 3.0] {
        let mut dense = Dense::product(n, 2f64.sqrt() / 2.0, 2f64.sqrt() / 2.0);
        dense.phase(gamma, |m| m);
        dense.rotate('y', -FRAC_PI_2);
        let (mean, var) = dense.moments('z');
        let sim = p.signal(gamma);
        assert!((sim.mean - mean).abs() < 1e-10);
        assert!((sim.variance - var).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rotation_oracle_random(n in 1usize..=8, theta in -7.0f64..7.0, c in prop::sample::select(vec!['x', 'y', 'z']),
                              seed in prop::collection::vec(-1.0f64..1.0, 6..12)) {
        prop_assume!(seed.iter().any(|x| x.abs() > 1e-3));
        let s = random_state(n, &seed);
        let fast = rotate(&s, axis(c), theta);
        let mut dense = Dense::from_dicke(&s);
        dense.rotate(c, theta);
        prop_assert!(max_diff(fast.amplitudes(), &dense.to_dicke_amplitudes()) < 1e-10);
    }

    #[test]
    fn rotations_are_unitary(n in 1usize..200, theta in -20.0f64..20.0, c in prop::sample::select(vec!['x', 'y'])) {
        let s = prepare_product(n, Superposition::from_polar(1.1)).unwrap();
        let r = rotate(&s, axis(c), theta);
        prop_assert!((r.norm_sqr() - 1.0).abs() < 1e-10);
        let back = rotate(&r, axis(c), -theta);
        prop_assert!(max_diff(back.amplitudes(), s.amplitudes()) < 1e-9);
    }
}
