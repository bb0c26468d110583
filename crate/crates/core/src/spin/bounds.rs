//! Cramér-Rao bounds for linear and k-body couplings.

use crate::error::{domain, Error, Result};

/// Extreme eigenvalues of the single-unit coupling `h_j` and the body count
/// of the coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumBound {
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub k_body: u32,
}

impl SpectrumBound {
    pub fn new(lambda_max: f64, lambda_min: f64, k_body: u32) -> Result<Self> {
        if !(lambda_max >= lambda_min) {
            return domain(format!("need Λ ≥ λ, got Λ = {lambda_max}, λ = {lambda_min}"));
        }
        if k_body == 0 {
            return domain("k_body must be at least 1");
        }
        Ok(Self { lambda_max, lambda_min, k_body })
    }

    /// `h = σ_z/2`.
    pub fn qubit(k_body: u32) -> Self {
        Self { lambda_max: 0.5, lambda_min: -0.5, k_body }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearBounds {
    pub heisenberg: f64,
    pub qnl: f64,
}

fn check(n_atoms: usize, t: f64) -> Result<()> {
    if n_atoms == 0 {
        return domain("need at least one atom");
    }
    if !(t > 0.0) {
        return domain(format!("interrogation time must be positive, got {t}"));
    }
    Ok(())
}

/// Heisenberg limit `1/(tN(Λ−λ))` and quantum noise limit `1/(t√N(Λ−λ))`.
pub fn crb_linear(bound: SpectrumBound, n_atoms: usize, t: f64) -> Result<LinearBounds> {
    check(n_atoms, t)?;
    if bound.k_body != 1 {
        return domain("crb_linear needs a one-body coupling");
    }
    let width = bound.lambda_max - bound.lambda_min;
    if width == 0.0 {
        return Err(Error::DegenerateSpectrum(bound.lambda_max));
    }
    let n = n_atoms as f64;
    Ok(LinearBounds { heisenberg: 1.0 / (t * n * width), qnl: 1.0 / (t * n.sqrt() * width) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearBound {
    /// `‖(Σh_j)^k‖ = max s^k − min s^k` over `s ∈ [Nλ, NΛ]`.
    pub seminorm: f64,
    pub delta_gamma: f64,
    /// Product-state scaling `t⁻¹ N^{−(k−1/2)}`.
    pub product_reference: f64,
}

/// Optimal bound `1/(t‖(Σh_j)^k‖)` for a k-body coupling.
pub fn crb_nonlinear(bound: SpectrumBound, n_atoms: usize, t: f64) -> Result<NonlinearBound> {
    check(n_atoms, t)?;
    if bound.lambda_max == bound.lambda_min {
        return Err(Error::DegenerateSpectrum(bound.lambda_max));
    }
    let n = n_atoms as f64;
    let k = bound.k_body as i32;
    let lo = n * bound.lambda_min;
    let hi = n * bound.lambda_max;
    // s^k is monotone on each side of 0, so its extremes sit at the end
    // points or at s = 0.
    let mut candidates = vec![lo.powi(k), hi.powi(k)];
    if lo < 0.0 && hi > 0.0 {
        candidates.push(0.0);
    }
    let max = candidates.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = candidates.iter().cloned().fold(f64::INFINITY, f64::min);
    let seminorm = max - min;
    if seminorm == 0.0 {
        return Err(Error::DegenerateSpectrum(bound.lambda_max));
    }
    Ok(NonlinearBound {
        seminorm,
        delta_gamma: 1.0 / (t * seminorm),
        product_reference: 1.0 / (t * n.powf(f64::from(bound.k_body) - 0.5)),
    })
}
