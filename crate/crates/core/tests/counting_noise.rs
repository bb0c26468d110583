use std::f64::consts::FRAC_PI_2;

use bec_metrology::counting::{
    corrected_moments, corrected_moments_at_mean, corrected_uncertainty, posterior_n0, simulate_counts, CountingNoise,
    NumberPrior, QuantumSignalModel,
};
use bec_metrology::spin::ramsey_uncertainty;
use proptest::prelude::*;

const T: f64 = 1.0;
const GAMMA: f64 = FRAC_PI_2 / T;

fn analytic(n: u64, sigma: f64) -> f64 {
    let model = QuantumSignalModel::ramsey(T).unwrap();
    let noise = CountingNoise::new(sigma).unwrap();
    corrected_uncertainty(&model, &NumberPrior::point(n), noise, GAMMA).unwrap().delta_gamma
}

#[test]
fn noiseless_reduction_is_exact() {
    for n in [1u64, 10, 100, 1000, 100_000] {
        let plain = ramsey_uncertainty(n as usize, T).unwrap().delta_gamma;
        assert!((analytic(n, 0.0) - plain).abs() < 1e-14 * plain);
        let model = QuantumSignalModel::ramsey(T).unwrap();
        let post = posterior_n0(
            &NumberPrior::flat(n.max(20), 0.1).unwrap(),
            n.max(20) as f64,
            CountingNoise::new(0.0).unwrap(),
        )
        .unwrap();
        assert_eq!(post.support(), &[n.max(20)]);
        let m = corrected_moments(&model, &post, CountingNoise::new(0.0).unwrap(), 0.3);
        let direct = (0.5 * n.max(20) as f64 * 0.3f64.cos(), 0.25 * n.max(20) as f64 * 0.3f64.sin().powi(2));
        assert!((m.mean - direct.0).abs() < 1e-12 * direct.0.abs());
        // E[m²] − E[m]² loses digits to cancellation when ⟨J_z⟩² ≫ Δ²J_z.
        assert!((m.variance - direct.1).abs() < 1e-9 * direct.1);
    }
}

#[test]
fn penalty_law_on_grid() {
    for n in [10u64, 100, 1000, 10_000] {
        let quantum_var = 0.25 * n as f64;
        let base = analytic(n, 0.0);
        for sigma in [0.0, 0.5, 1.0, 3.0, 10.0, 30.0] {
            let expected = (1.0 + sigma * sigma / (2.0 * quantum_var)).sqrt();
            let ratio = analytic(n, sigma) / base;
            assert!((ratio - expected).abs() < 1e-12 * expected, "N = {n}, σ = {sigma}");
        }
    }
}

#[test]
fn monte_carlo_matches_analytic() {
    let model = QuantumSignalModel::ramsey(T).unwrap();
    // Dividing by the miscounted N adds a relative 3σ²/N² to the variance,
    // so the grid stays where that is below the Monte Carlo resolution.
    for (n, sigma) in [(100u64, 0.0), (100, 2.0), (1000, 10.0), (1000, 20.0), (10_000, 50.0), (10_000, 100.0)] {
        let noise = CountingNoise::new(sigma).unwrap();
        let mc = simulate_counts(&model, &NumberPrior::point(n), noise, GAMMA, 100_000, 7).unwrap();
        let a = analytic(n, sigma);
        let z = (mc.delta_gamma - a) / mc.stderr;
        assert!(z.abs() < 3.0, "N = {n}, σ = {sigma}: mc {} ± {}, analytic {a}", mc.delta_gamma, mc.stderr);
        assert!((mc.mean_estimate - GAMMA).abs() < 5.0 * mc.delta_gamma / (1e5f64).sqrt());
    }
}

#[test]
fn monte_carlo_with_number_prior() {
    let model = QuantumSignalModel::ramsey(T).unwrap();
    let noise = CountingNoise::new(8.0).unwrap();
    let prior = NumberPrior::flat(1000, 0.1).unwrap();
    let mc = simulate_counts(&model, &prior, noise, GAMMA, 100_000, 11).unwrap();
    let post = posterior_n0(&prior, 1000.0, noise).unwrap();
    let a = corrected_uncertainty(&model, &post, noise, GAMMA).unwrap().delta_gamma;
    // The prior spread changes N by ±10%, which moves δγ by far less than
    // the tolerance at the operating point where ⟨J_z⟩ = 0.
    assert!((mc.delta_gamma / a - 1.0).abs() < 0.02, "{} vs {a}", mc.delta_gamma);
}

#[test]
fn monte_carlo_is_reproducible() {
    let model = QuantumSignalModel::ramsey(T).unwrap();
    let noise = CountingNoise::new(2.0).unwrap();
    let a = simulate_counts(&model, &NumberPrior::point(500), noise, GAMMA, 10_000, 3).unwrap();
    let b = simulate_counts(&model, &NumberPrior::point(500), noise, GAMMA, 10_000, 3).unwrap();
    let c = simulate_counts(&model, &NumberPrior::point(500), noise, GAMMA, 10_000, 4).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.estimates, c.estimates);
}

#[test]
fn uncertainty_grows_with_sigma() {
    let mut prev = 0.0;
    for sigma in [0.0, 0.1, 1.0, 2.0, 5.0, 20.0, 100.0] {
        let v = analytic(400, sigma);
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn zero_slope_is_reported() {
    let model = QuantumSignalModel::ramsey(T).unwrap();
    let noise = CountingNoise::new(1.0).unwrap();
    assert!(corrected_uncertainty(&model, &NumberPrior::point(100), noise, 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posterior_is_normalized_and_narrower(center in 200u64..5000, sigma in 0.1f64..30.0, offset in -0.05f64..0.05) {
        let prior = NumberPrior::flat(center, 0.1).unwrap();
        let noise = CountingNoise::new(sigma).unwrap();
        let measured = center as f64 * (1.0 + offset);
        let post = posterior_n0(&prior, measured, noise).unwrap();
        prop_assert!((post.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(post.probabilities().iter().all(|&p| p >= 0.0));
        prop_assert!(post.variance() <= prior.variance() + 1e-9);
        prop_assert!(post.support().iter().all(|n| prior.support().contains(n)));
        prop_assert!(post.variance() <= noise.number_variance() * 1.05 + 1.0);
    }

    #[test]
    fn point_posterior_moments_agree(n in 2u64..10_000, sigma in 0.0f64..50.0, gamma in 0.1f64..3.0) {
        let model = QuantumSignalModel::ramsey(T).unwrap();
        let noise = CountingNoise::new(sigma).unwrap();
        let p = NumberPrior::point(n);
        let a = corrected_moments(&model, &p, noise, gamma);
        let b = corrected_moments_at_mean(&model, &p, noise, gamma);
        prop_assert!((a.mean - b.mean).abs() <= 1e-9 * (1.0 + b.mean.abs()));
        prop_assert!((a.variance - b.variance).abs() <= 1e-9 * (1.0 + b.variance));
    }
}
