//! Interferometric protocols: prepare, phase-shift, read out, and propagate
//! the readout noise into an uncertainty on the coupling `γ`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::dicke::{
    evolve, generator_moments, prepare_product, rotate, single_qubit_purity, Axis, CollectiveHamiltonian, DickeState,
    Moments, Observable,
};
use crate::error::{domain, Error, Result};
use crate::physical::Superposition;
use crate::stats::loglog_slope;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityResult {
    pub delta_gamma: f64,
    pub scaling_exponent_estimate: Option<f64>,
}

impl SensitivityResult {
    pub fn new(delta_gamma: f64) -> Self {
        Self { delta_gamma, scaling_exponent_estimate: None }
    }
}

/// Optional pulse before the final measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Readout {
    pub pulse: Option<(Axis, f64)>,
    pub observable: Observable,
}

impl Readout {
    /// `π/2` about `−y`, then `J_z`: measures the pre-pulse `J_x`.
    pub fn ramsey() -> Self {
        Self { pulse: Some((Axis::Y, -FRAC_PI_2)), observable: Observable::J(Axis::Z) }
    }

    pub fn direct(axis: Axis) -> Self {
        Self { pulse: None, observable: Observable::J(axis) }
    }

    pub fn parity() -> Self {
        Self { pulse: None, observable: Observable::Parity }
    }
}

/// A complete single-shot protocol at fixed interrogation time `t`.
#[derive(Debug, Clone)]
pub struct Protocol {
    pub initial: DickeState,
    pub hamiltonian: CollectiveHamiltonian,
    pub readout: Readout,
    pub t: f64,
}

impl Protocol {
    pub fn new(initial: DickeState, hamiltonian: CollectiveHamiltonian, readout: Readout, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return domain(format!("interrogation time must be positive, got {t}"));
        }
        Ok(Self { initial, hamiltonian, readout, t })
    }

    /// Equatorial product state, `γ J_z`, Ramsey readout.
    pub fn ramsey(n_atoms: usize, t: f64) -> Result<Self> {
        Self::new(
            prepare_product(n_atoms, Superposition::equal())?,
            CollectiveHamiltonian::LinearJz,
            Readout::ramsey(),
            t,
        )
    }

    /// GHZ input, `γ J_z`, parity readout.
    pub fn cat(n_atoms: usize, t: f64) -> Result<Self> {
        Self::new(DickeState::cat(n_atoms)?, CollectiveHamiltonian::LinearJz, Readout::parity(), t)
    }

    /// Equatorial product state, `γ N J_z`, Ramsey readout.
    pub fn enhanced(n_atoms: usize, t: f64) -> Result<Self> {
        Self::new(
            prepare_product(n_atoms, Superposition::equal())?,
            CollectiveHamiltonian::EnhancedNJz,
            Readout::ramsey(),
            t,
        )
    }

    /// `cos(π/8)|0⟩ + sin(π/8)|1⟩` product input, `γ J_z²`, direct `J_y` readout.
    pub fn nonlinear_product(n_atoms: usize, t: f64) -> Result<Self> {
        if n_atoms < 2 {
            return domain("the J_z² protocol needs N ≥ 2");
        }
        Self::new(
            prepare_product(n_atoms, Superposition::pi_over_8())?,
            CollectiveHamiltonian::QuadraticJz2,
            Readout::direct(Axis::Y),
            t,
        )
    }

    pub fn n_atoms(&self) -> usize {
        self.initial.n_atoms()
    }

    fn pulse(&self, s: &DickeState) -> DickeState {
        match self.readout.pulse {
            Some((axis, angle)) => rotate(s, axis, angle),
            None => s.clone(),
        }
    }

    /// State after the phase shift, before the readout pulse.
    pub fn evolved(&self, gamma: f64) -> DickeState {
        evolve(&self.initial, self.hamiltonian, gamma, self.t).expect("t > 0 checked at construction")
    }

    /// State immediately before the measurement.
    pub fn final_state(&self, gamma: f64) -> DickeState {
        self.pulse(&self.evolved(gamma))
    }

    pub fn signal(&self, gamma: f64) -> Moments {
        self.readout.observable.moments(&self.final_state(gamma))
    }

    /// Exact `∂⟨O⟩/∂γ = 2t Im⟨Rχ|O|R h χ⟩` with `χ = e^{−iγth}ψ₀`.
    pub fn signal_derivative(&self, gamma: f64) -> f64 {
        let chi = self.evolved(gamma);
        let a = self.pulse(&chi);
        let h_chi = chi.with_amplitudes(self.hamiltonian.apply(chi.amplitudes()));
        let b = self.pulse(&h_chi);
        let ob = self.readout.observable.apply(b.amplitudes());
        let overlap: C64 = a.amplitudes().iter().zip(&ob).map(|(x, y)| x.conj() * y).sum();
        2.0 * self.t * overlap.im
    }

    /// Largest plausible `|∂⟨O⟩/∂γ|`, used to decide when a derivative is zero.
    fn derivative_scale(&self) -> f64 {
        let n = self.n_atoms() as f64;
        let h = match self.hamiltonian {
            CollectiveHamiltonian::LinearJz => n,
            CollectiveHamiltonian::QuadraticJz2 => n * n,
            CollectiveHamiltonian::EnhancedNJz => n * n,
        };
        let o = match self.readout.observable {
            Observable::J(_) => n,
            Observable::Parity => 1.0,
        };
        self.t * h * o
    }

    /// Error-propagation uncertainty `ΔO / |∂⟨O⟩/∂γ|`.
    pub fn sensitivity(&self, gamma: f64) -> Result<SensitivityResult> {
        let m = self.signal(gamma);
        let d = self.signal_derivative(gamma);
        if !(d.abs() > 1e-13 * self.derivative_scale()) {
            return Err(Error::UndefinedSensitivity(format!("signal slope vanishes at γ = {gamma}, t = {}", self.t)));
        }
        Ok(SensitivityResult::new(m.variance.sqrt() / d.abs()))
    }

    /// Outcome probabilities of the final measurement: `J_z` levels for the
    /// `J_z` readout, `(p₊, p₋)` for parity. `J_x`/`J_y` readouts are mapped to
    /// `J_z` by the corresponding `π/2` pulse.
    pub fn outcome_distribution(&self, gamma: f64) -> Vec<f64> {
        let s = self.final_state(gamma);
        match self.readout.observable {
            Observable::J(Axis::Z) => s.probabilities(),
            Observable::J(Axis::X) => rotate(&s, Axis::Y, -FRAC_PI_2).probabilities(),
            Observable::J(Axis::Y) => rotate(&s, Axis::X, FRAC_PI_2).probabilities(),
            Observable::Parity => {
                let p = Observable::Parity.moments(&s).mean;
                vec![0.5 * (1.0 + p), 0.5 * (1.0 - p)]
            }
        }
    }

    /// Quantum Fisher information `4t²⟨Δ²h⟩`; independent of `γ` because `h`
    /// commutes with the propagator.
    pub fn qfi(&self) -> f64 {
        4.0 * self.t * self.t * generator_moments(&self.initial, self.hamiltonian).variance
    }

    /// `⟨Δ²K⟩` with `K = t h`.
    pub fn generator_variance(&self) -> f64 {
        self.t * self.t * generator_moments(&self.initial, self.hamiltonian).variance
    }

    pub fn purity(&self, gamma: f64) -> f64 {
        single_qubit_purity(&self.evolved(gamma))
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return domain(format!("interrogation time must be positive, got {t}"));
    }
    Ok(())
}

fn check_atoms(n: usize) -> Result<()> {
    if n == 0 {
        return domain("need at least one atom");
    }
    Ok(())
}

/// `δγ = 1/(t√N)`.
pub fn ramsey_uncertainty(n_atoms: usize, t: f64) -> Result<SensitivityResult> {
    check_atoms(n_atoms)?;
    check_time(t)?;
    Ok(SensitivityResult::new(1.0 / (t * (n_atoms as f64).sqrt())))
}

/// Ramsey signal `(N/2) cos φ` and variance `(N/4) sin²φ`.
pub fn ramsey_signal(n_atoms: usize, phi: f64) -> Moments {
    let n = n_atoms as f64;
    Moments { mean: 0.5 * n * phi.cos(), variance: 0.25 * n * phi.sin().powi(2) }
}

/// `δγ = 1/(tN)`.
pub fn cat_uncertainty(n_atoms: usize, t: f64) -> Result<SensitivityResult> {
    check_atoms(n_atoms)?;
    check_time(t)?;
    Ok(SensitivityResult::new(1.0 / (t * n_atoms as f64)))
}

/// Cat signal `cos Nφ` and variance `sin²Nφ`.
pub fn cat_signal(n_atoms: usize, phi: f64) -> Moments {
    let x = n_atoms as f64 * phi;
    Moments { mean: x.cos(), variance: x.sin().powi(2) }
}

/// `δγ = 1/(t N^{3/2})` for the `N J_z` coupling with product input.
pub fn enhanced_uncertainty(n_atoms: usize, t: f64) -> Result<SensitivityResult> {
    check_atoms(n_atoms)?;
    check_time(t)?;
    Ok(SensitivityResult::new(1.0 / (t * (n_atoms as f64).powf(1.5))))
}

#[derive(Debug, Clone)]
pub struct TimePoint {
    pub t: f64,
    pub result: Result<SensitivityResult>,
    pub purity: f64,
}

/// Runs the `J_z²` product protocol at each time in `t_grid`.
pub fn product_nonlinear_protocol(n_atoms: usize, gamma: f64, t_grid: &[f64]) -> Result<Vec<TimePoint>> {
    if n_atoms < 2 {
        return domain("the J_z² protocol needs N ≥ 2");
    }
    t_grid
        .iter()
        .map(|&t| {
            let p = Protocol::nonlinear_product(n_atoms, t)?;
            Ok(TimePoint { t, result: p.sensitivity(gamma), purity: p.purity(gamma) })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    Ramsey,
    Cat,
    Enhanced,
    ProductQuadratic,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 4] =
        [ProtocolKind::Ramsey, ProtocolKind::Cat, ProtocolKind::Enhanced, ProtocolKind::ProductQuadratic];

    pub fn name(self) -> &'static str {
        match self {
            ProtocolKind::Ramsey => "ramsey",
            ProtocolKind::Cat => "cat",
            ProtocolKind::Enhanced => "enhanced_NJz",
            ProtocolKind::ProductQuadratic => "product_Jz2",
        }
    }

    pub fn build(self, n_atoms: usize, t: f64) -> Result<Protocol> {
        match self {
            ProtocolKind::Ramsey => Protocol::ramsey(n_atoms, t),
            ProtocolKind::Cat => Protocol::cat(n_atoms, t),
            ProtocolKind::Enhanced => Protocol::enhanced(n_atoms, t),
            ProtocolKind::ProductQuadratic => Protocol::nonlinear_product(n_atoms, t),
        }
    }

    /// Coupling at the standard operating point: accumulated phase `π/2` for
    /// the linear protocols, `γtN = short_time` for the `J_z²` protocol.
    pub fn operating_gamma(self, n_atoms: usize, t: f64, short_time: f64) -> f64 {
        let n = n_atoms as f64;
        match self {
            ProtocolKind::Ramsey => FRAC_PI_2 / t,
            ProtocolKind::Cat => PI / (2.0 * n * t),
            ProtocolKind::Enhanced => FRAC_PI_2 / (n * t),
            ProtocolKind::ProductQuadratic => short_time / (n * t),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub protocol: ProtocolKind,
    pub n_atoms: usize,
    pub t: f64,
    pub gamma: f64,
    pub delta_gamma: f64,
    pub purity: f64,
}

/// Simulated `δγ` at the operating point for each `N`, in parallel, together
/// with the fitted log-log slope.
pub fn scaling_sweep(
    kind: ProtocolKind,
    n_list: &[usize],
    t: f64,
    short_time: f64,
) -> Result<(Vec<SweepRow>, Option<f64>)> {
    let rows: Vec<SweepRow> = n_list
        .par_iter()
        .map(|&n| {
            let p = kind.build(n, t)?;
            let gamma = kind.operating_gamma(n, t, short_time);
            let s = p.sensitivity(gamma)?;
            Ok(SweepRow { protocol: kind, n_atoms: n, t, gamma, delta_gamma: s.delta_gamma, purity: p.purity(gamma) })
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.n_atoms as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.delta_gamma).collect();
    let slope = loglog_slope(&xs, &ys);
    Ok((rows, slope))
}
