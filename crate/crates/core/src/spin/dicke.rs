//! Symmetric N-qubit states in the Dicke basis and the collective operators
//! acting on them.
//!
//! Index `k = 0..=N` labels the `J_z` eigenvalue `m = k − N/2`, i.e. `k` atoms
//! in the upper state `|0⟩`.

use num_complex::Complex64 as C64;

use crate::error::{domain, Result};
use crate::physical::Superposition;
use crate::special::{bessel_j_sequence, ln_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DickeState {
    n_atoms: usize,
    amplitudes: Vec<C64>,
}

/// Mean and variance of a measured observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

impl DickeState {
    /// Builds a state from raw amplitudes, checking the length and norm.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return domain("a Dicke state needs at least N + 1 = 2 amplitudes");
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return domain(format!("amplitudes not normalized: Σ|c|² = {norm}"));
        }
        Ok(Self { n_atoms: amplitudes.len() - 1, amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return domain("cannot normalize the zero vector");
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amplitudes)
    }

    /// The `J_z` eigenstate with `m = k − N/2`.
    pub fn basis(n_atoms: usize, k: usize) -> Result<Self> {
        if n_atoms == 0 || k > n_atoms {
            return domain(format!("no Dicke level k = {k} for N = {n_atoms}"));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); n_atoms + 1];
        amplitudes[k] = C64::new(1.0, 0.0);
        Ok(Self { n_atoms, amplitudes })
    }

    /// GHZ state `(|0…0⟩ + |1…1⟩)/√2`, i.e. equal weight at `m = ±N/2`.
    pub fn cat(n_atoms: usize) -> Result<Self> {
        if n_atoms == 0 {
            return domain("cat state needs N ≥ 1");
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); n_atoms + 1];
        amplitudes[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amplitudes[n_atoms] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Ok(Self { n_atoms, amplitudes })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `m` for index `k`.
    pub fn m(&self, k: usize) -> f64 {
        k as f64 - 0.5 * self.n_atoms as f64
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &DickeState) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Probabilities of the `J_z` outcomes `m = −N/2 … N/2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn with_amplitudes(&self, amplitudes: Vec<C64>) -> Self {
        Self { n_atoms: self.n_atoms, amplitudes }
    }
}

/// `(c₁|0⟩ + c₂|1⟩)^⊗N`, amplitude `√C(N,k) c₁^k c₂^{N−k}` at level `k`.
pub fn prepare_product(n_atoms: usize, sup: Superposition) -> Result<DickeState> {
    if n_atoms == 0 {
        return domain("product state needs N ≥ 1");
    }
    let n = n_atoms as f64;
    let ln_n_fact = ln_gamma(n + 1.0);
    let amplitudes = (0..=n_atoms)
        .map(|k| {
            let kf = k as f64;
            let up = power_signed(sup.c1, k);
            let down = power_signed(sup.c2, n_atoms - k);
            match (up, down) {
                (Some((lu, su)), Some((ld, sd))) => {
                    let ln_binom = ln_n_fact - ln_gamma(kf + 1.0) - ln_gamma(n - kf + 1.0);
                    C64::new(su * sd * (0.5 * ln_binom + lu + ld).exp(), 0.0)
                }
                _ => C64::new(0.0, 0.0),
            }
        })
        .collect();
    DickeState::normalized(amplitudes)
}

/// `c^p` as `(ln|c^p|, sign)`, `None` when the power vanishes.
fn power_signed(c: f64, p: usize) -> Option<(f64, f64)> {
    if p == 0 {
        return Some((0.0, 1.0));
    }
    if c == 0.0 {
        return None;
    }
    let sign = if c < 0.0 && p % 2 == 1 { -1.0 } else { 1.0 };
    Some((p as f64 * c.abs().ln(), sign))
}

/// Ladder coefficient `⟨k+1|J₊|k⟩ = √((N−k)(k+1))`.
fn ladder(n: usize, k: usize) -> f64 {
    (((n - k) * (k + 1)) as f64).sqrt()
}

/// `J_axis v` for a raw amplitude vector of length `N + 1`.
pub(crate) fn apply_j(axis: Axis, v: &[C64]) -> Vec<C64> {
    let n = v.len() - 1;
    let half_n = 0.5 * n as f64;
    match axis {
        Axis::Z => v.iter().enumerate().map(|(k, a)| a * (k as f64 - half_n)).collect(),
        Axis::X | Axis::Y => {
            let mut out = vec![C64::new(0.0, 0.0); n + 1];
            for k in 0..=n {
                // J₊ part: from k−1 into k; J₋ part: from k+1 into k.
                let raise = if k > 0 { v[k - 1] * ladder(n, k - 1) } else { C64::new(0.0, 0.0) };
                let lower = if k < n { v[k + 1] * ladder(n, k) } else { C64::new(0.0, 0.0) };
                out[k] = match axis {
                    Axis::X => 0.5 * (raise + lower),
                    _ => C64::new(0.0, -0.5) * (raise - lower),
                };
            }
            out
        }
    }
}

/// Spin-flip parity `(Πv)_m = v_{−m}`.
pub(crate) fn apply_parity(v: &[C64]) -> Vec<C64> {
    v.iter().rev().copied().collect()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Applies `exp(−i·angle·J_axis)`.
///
/// `z` rotations are diagonal. For `x`/`y` the propagator is expanded in
/// Chebyshev polynomials of `J_axis/j` with Bessel coefficients, which is
/// exact to machine precision once the series is truncated past `|angle|·j`.
pub fn rotate(state: &DickeState, axis: Axis, angle: f64) -> DickeState {
    if angle == 0.0 {
        return state.clone();
    }
    let n = state.n_atoms;
    let j = 0.5 * n as f64;
    if axis == Axis::Z {
        let amps = state
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| a * C64::from_polar(1.0, -angle * (k as f64 - j)))
            .collect();
        return state.with_amplitudes(amps);
    }
    let x = angle * j;
    let kmax = (x.abs() + 20.0 + 8.0 * x.abs().cbrt()).ceil() as usize;
    let bessel = bessel_j_sequence(x, kmax);
    let scaled = |v: &[C64]| -> Vec<C64> { apply_j(axis, v).into_iter().map(|a| a / j).collect() };

    // (−i)^k cycles through 1, −i, −1, i.
    let phase = [C64::new(1.0, 0.0), C64::new(0.0, -1.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)];
    let mut result: Vec<C64> = state.amplitudes.iter().map(|a| a * bessel[0]).collect();
    let mut prev = state.amplitudes.clone();
    let mut cur = scaled(&prev);
    for k in 1..=kmax {
        let coeff = 2.0 * bessel[k] * phase[k % 4];
        for (r, c) in result.iter_mut().zip(&cur) {
            *r += coeff * c;
        }
        if k == kmax {
            break;
        }
        let next: Vec<C64> = scaled(&cur).iter().zip(&prev).map(|(a, b)| 2.0 * a - b).collect();
        prev = cur;
        cur = next;
    }
    state.with_amplitudes(result)
}

/// Collective generator of the phase shift, `γ` times one of these operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CollectiveHamiltonian {
    /// `γ J_z`
    LinearJz,
    /// `γ J_z²`
    QuadraticJz2,
    /// `γ N J_z`
    EnhancedNJz,
}

impl CollectiveHamiltonian {
    /// Eigenvalue of the generator `h` on level `m`.
    pub fn eigenvalue(self, n_atoms: usize, m: f64) -> f64 {
        match self {
            CollectiveHamiltonian::LinearJz => m,
            CollectiveHamiltonian::QuadraticJz2 => m * m,
            CollectiveHamiltonian::EnhancedNJz => n_atoms as f64 * m,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CollectiveHamiltonian::LinearJz => "linear_Jz",
            CollectiveHamiltonian::QuadraticJz2 => "quadratic_Jz2",
            CollectiveHamiltonian::EnhancedNJz => "enhanced_NJz",
        }
    }

    pub(crate) fn apply(self, v: &[C64]) -> Vec<C64> {
        let n = v.len() - 1;
        let half_n = 0.5 * n as f64;
        v.iter().enumerate().map(|(k, a)| a * self.eigenvalue(n, k as f64 - half_n)).collect()
    }
}

/// `exp(−iγt h)`, diagonal in the Dicke basis.
pub fn evolve(state: &DickeState, ham: CollectiveHamiltonian, gamma: f64, t: f64) -> Result<DickeState> {
    if !(t >= 0.0) {
        return domain(format!("evolution time must be non-negative, got {t}"));
    }
    let n = state.n_atoms;
    let amps = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(k, a)| a * C64::from_polar(1.0, -gamma * t * ham.eigenvalue(n, state.m(k))))
        .collect();
    Ok(state.with_amplitudes(amps))
}

/// Exact `⟨J_axis⟩` and `⟨ΔJ_axis²⟩`.
pub fn expectation(state: &DickeState, component: Axis) -> Moments {
    let jv = apply_j(component, &state.amplitudes);
    let mean = dot(&state.amplitudes, &jv).re;
    let second = jv.iter().map(|a| a.norm_sqr()).sum::<f64>();
    Moments { mean, variance: (second - mean * mean).max(0.0) }
}

/// Mean and variance of a generator `h` (diagonal in the Dicke basis).
pub fn generator_moments(state: &DickeState, ham: CollectiveHamiltonian) -> Moments {
    let n = state.n_atoms;
    let (mut s1, mut s2) = (0.0, 0.0);
    for (k, a) in state.amplitudes.iter().enumerate() {
        let h = ham.eigenvalue(n, state.m(k));
        let p = a.norm_sqr();
        s1 += p * h;
        s2 += p * h * h;
    }
    Moments { mean: s1, variance: (s2 - s1 * s1).max(0.0) }
}

/// Purity `Tr ρ₁²` of the one-atom reduced state of a symmetric pure state,
/// `(1 + |v|²)/2` with Bloch vector `v = 2⟨J⟩/N`.
pub fn single_qubit_purity(state: &DickeState) -> f64 {
    let n = state.n_atoms as f64;
    let v2: f64 = [Axis::X, Axis::Y, Axis::Z].iter().map(|&ax| (2.0 * expectation(state, ax).mean / n).powi(2)).sum();
    0.5 * (1.0 + v2)
}

/// Observable measured at the end of a protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    J(Axis),
    /// Spin-flip parity, the collective stand-in for the single-qubit cat readout.
    Parity,
}

impl Observable {
    pub(crate) fn apply(self, v: &[C64]) -> Vec<C64> {
        match self {
            Observable::J(axis) => apply_j(axis, v),
            Observable::Parity => apply_parity(v),
        }
    }

    pub fn moments(self, state: &DickeState) -> Moments {
        let ov = self.apply(&state.amplitudes);
        let mean = dot(&state.amplitudes, &ov).re;
        let second = ov.iter().map(|a| a.norm_sqr()).sum::<f64>();
        Moments { mean, variance: (second - mean * mean).max(0.0) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn single_qubit_product() {
        let s = prepare_product(1, Superposition::equal()).unwrap();
        for a in s.amplitudes() {
            assert!(close(*a, C64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        }
    }

    #[test]
    fn all_up_product() {
        let s = prepare_product(2, Superposition::new(1.0, 0.0).unwrap()).unwrap();
        assert_eq!(s.amplitudes()[2], C64::new(1.0, 0.0));
        assert_eq!(s.amplitudes()[0], C64::new(0.0, 0.0));
        let z = expectation(&s, Axis::Z);
        assert_eq!((z.mean, z.variance), (1.0, 0.0));
    }

    #[test]
    fn equatorial_moments_n50() {
        let s = prepare_product(50, Superposition::equal()).unwrap();
        let z = expectation(&s, Axis::Z);
        assert!(z.mean.abs() < 1e-12);
        assert!((z.variance - 12.5).abs() < 1e-11);
        let x = expectation(&s, Axis::X);
        assert!((x.mean - 25.0).abs() < 1e-11);
        assert!(x.variance.abs() < 1e-10);
    }

    #[test]
    fn rotation_identity_and_qubit() {
        let s = prepare_product(7, Superposition::pi_over_8()).unwrap();
        assert_eq!(rotate(&s, Axis::Y, 0.0), s);
        let up = DickeState::basis(1, 1).unwrap();
        let r = rotate(&up, Axis::Y, PI / 2.0);
        assert!((r.amplitudes()[0].norm() - FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((r.amplitudes()[1].norm() - FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn rotation_maps_jy_to_jz() {
        let s = prepare_product(13, Superposition::new(0.6, 0.8).unwrap()).unwrap();
        let s = evolve(&s, CollectiveHamiltonian::QuadraticJz2, 0.37, 1.0).unwrap();
        let before = expectation(&s, Axis::Y).mean;
        let after = expectation(&rotate(&s, Axis::X, PI / 2.0), Axis::Z).mean;
        assert!((before - after).abs() < 1e-10);
        let bx = expectation(&s, Axis::X).mean;
        let ax = expectation(&rotate(&s, Axis::Y, -PI / 2.0), Axis::Z).mean;
        assert!((bx - ax).abs() < 1e-10);
    }

    #[test]
    fn large_rotation_preserves_norm() {
        let s = prepare_product(1000, Superposition::equal()).unwrap();
        let r = rotate(&s, Axis::Y, -PI / 2.0);
        assert!((r.norm_sqr() - 1.0).abs() < 1e-10);
        let z = expectation(&r, Axis::Z);
        assert!((z.mean - 500.0).abs() < 1e-8, "{}", z.mean);
    }

    #[test]
    fn linear_evolution_rotates_bloch_vector() {
        let s = prepare_product(1, Superposition::equal()).unwrap();
        let e = evolve(&s, CollectiveHamiltonian::LinearJz, PI, 1.0).unwrap();
        assert!((expectation(&e, Axis::X).mean + 0.5).abs() < 1e-14);
        assert_eq!(evolve(&s, CollectiveHamiltonian::LinearJz, 3.0, 0.0).unwrap(), s);
        assert!(evolve(&s, CollectiveHamiltonian::LinearJz, 3.0, -1.0).is_err());
    }

    #[test]
    fn cat_parity() {
        let s = DickeState::cat(8).unwrap();
        let phi = 0.13;
        let e = evolve(&s, CollectiveHamiltonian::LinearJz, phi, 1.0).unwrap();
        let p = Observable::Parity.moments(&e);
        assert!((p.mean - (8.0 * phi).cos()).abs() < 1e-14);
        assert!((p.variance - (8.0 * phi).sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn purity_of_products() {
        let s = prepare_product(20, Superposition::from_polar(1.1)).unwrap();
        assert!((single_qubit_purity(&s) - 1.0).abs() < 1e-12);
        let twisted = evolve(&s, CollectiveHamiltonian::QuadraticJz2, 0.1, 1.0).unwrap();
        assert!(single_qubit_purity(&twisted) < 0.99);
        let shifted = evolve(&s, CollectiveHamiltonian::EnhancedNJz, 0.1, 3.0).unwrap();
        assert!((single_qubit_purity(&shifted) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_empty_states() {
        assert!(prepare_product(0, Superposition::equal()).is_err());
        assert!(DickeState::from_amplitudes(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).is_err());
    }
}
