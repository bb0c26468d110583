//! Quantum and classical Fisher information.

use super::dicke::{generator_moments, CollectiveHamiltonian, DickeState};
use crate::error::{domain, Result};

/// Pure-state quantum Fisher information `4t²⟨Δ²h⟩`.
pub fn qfi_pure(state: &DickeState, generator: CollectiveHamiltonian, t: f64) -> f64 {
    4.0 * t * t * generator_moments(state, generator).variance
}

/// Classical Fisher information together with the outcomes that were
/// dropped because their probability fell below the floor.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherEstimate {
    pub value: f64,
    pub excluded: Vec<usize>,
}

pub const PROBABILITY_FLOOR: f64 = 1e-14;

/// Central-difference estimate of `Σ_ζ (∂_γ p_ζ)² / p_ζ`.
pub fn classical_fisher<F>(outcome_dist: F, gamma: f64, step: f64) -> Result<FisherEstimate>
where
    F: Fn(f64) -> Vec<f64>,
{
    if !(step > 0.0) {
        return domain(format!("finite-difference step must be positive, got {step}"));
    }
    let p = outcome_dist(gamma);
    let plus = outcome_dist(gamma + step);
    let minus = outcome_dist(gamma - step);
    if plus.len() != p.len() || minus.len() != p.len() {
        return domain("outcome distribution changed length with γ");
    }
    for (name, dist) in [("γ", &p), ("γ+step", &plus), ("γ−step", &minus)] {
        let s: f64 = dist.iter().sum();
        if (s - 1.0).abs() > 1e-9 || dist.iter().any(|&x| x < -1e-12) {
            return domain(format!("outcome distribution at {name} is not a probability vector (Σp = {s})"));
        }
    }
    let mut value = 0.0;
    let mut excluded = Vec::new();
    for (i, &pi) in p.iter().enumerate() {
        let dp = (plus[i] - minus[i]) / (2.0 * step);
        if pi < PROBABILITY_FLOOR {
            if dp.abs() > 0.0 {
                excluded.push(i);
            }
            continue;
        }
        value += dp * dp / pi;
    }
    if !excluded.is_empty() {
        log::debug!("classical Fisher information: {} outcomes below floor excluded", excluded.len());
    }
    Ok(FisherEstimate { value, excluded })
}
