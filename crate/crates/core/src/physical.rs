//! Physical constants, atomic species, trap geometry and the coupling
//! constants derived from them.
//!
//! Everything is stored in SI units. Configuration files use the units the
//! experimental literature quotes (nm, μm, u, cm³/s) and are converted at the
//! boundary, see [`crate::config`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Reduced Planck constant and atomic mass unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub atomic_mass_unit: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values.
    pub const SI: PhysicalConstants =
        PhysicalConstants { hbar: 1.054_571_817e-34, atomic_mass_unit: 1.660_539_066_60e-27 };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

pub const HBAR: f64 = PhysicalConstants::SI.hbar;
pub const ATOMIC_MASS_UNIT: f64 = PhysicalConstants::SI.atomic_mass_unit;

/// `g = 4πħ²a/m`.
pub fn coupling_constant(a: f64, m: f64) -> Result<f64> {
    if !(a > 0.0) || !(m > 0.0) {
        return domain(format!("coupling constant needs a > 0 and m > 0, got a = {a:e}, m = {m:e}"));
    }
    Ok(4.0 * PI * HBAR * HBAR * a / m)
}

/// A two-level atomic species: mass, the three s-wave scattering lengths and
/// the two spin-exchange loss constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Species {
    pub mass: f64,
    pub a11: f64,
    pub a22: f64,
    pub a12: f64,
    /// Γ₁₂ in m³/s.
    pub gamma12_loss: f64,
    /// Γ₂₂ in m³/s.
    pub gamma22_loss: f64,
}

impl Species {
    pub fn new(mass: f64, a11: f64, a22: f64, a12: f64, gamma12_loss: f64, gamma22_loss: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return domain(format!("species mass must be positive, got {mass:e}"));
        }
        for (name, a) in [("a11", a11), ("a22", a22), ("a12", a12)] {
            if !(a > 0.0) {
                return domain(format!("scattering length {name} must be positive, got {a:e}"));
            }
        }
        if !(gamma12_loss >= 0.0) || !(gamma22_loss >= 0.0) {
            return domain("loss constants must be non-negative");
        }
        Ok(Self { mass, a11, a22, a12, gamma12_loss, gamma22_loss })
    }

    /// ⁸⁷Rb in |F=1,M=−1⟩ / |F=2,M=+1⟩: a₂₂ : a₁₂ : a₁₁ = 0.97 : 1 : 1.03 with
    /// a₁₁ = 5.31 nm, and the measured spin-exchange loss constants.
    pub fn rb87() -> Self {
        let a11 = 5.31e-9;
        let a12 = a11 / 1.03;
        let a22 = 0.97 * a12;
        Self {
            mass: 86.909_180_5 * ATOMIC_MASS_UNIT,
            a11,
            a22,
            a12,
            gamma12_loss: 0.780e-13 * 1e-6,
            gamma22_loss: 1.194e-13 * 1e-6,
        }
    }

    /// Generic estimate species: ⁸⁷Rb mass with every scattering length set
    /// to 10 nm and no losses.
    pub fn typical() -> Self {
        Self {
            mass: 86.909_180_5 * ATOMIC_MASS_UNIT,
            a11: 10e-9,
            a22: 10e-9,
            a12: 10e-9,
            gamma12_loss: 0.0,
            gamma22_loss: 0.0,
        }
    }

    pub fn g11(&self) -> f64 {
        4.0 * PI * HBAR * HBAR * self.a11 / self.mass
    }

    pub fn g22(&self) -> f64 {
        4.0 * PI * HBAR * HBAR * self.a22 / self.mass
    }

    pub fn g12(&self) -> f64 {
        4.0 * PI * HBAR * HBAR * self.a12 / self.mass
    }
}

/// The two couplings of the Josephson Hamiltonian:
/// `γ₁ = (g₁₁ − g₂₂)/2` multiplies `(N−1)η_N J_z`, `γ₂ = (g₁₁ + g₂₂)/2 − g₁₂`
/// multiplies `η_N J_z²`.
pub fn josephson_couplings(species: &Species) -> (f64, f64) {
    let (g11, g22, g12) = (species.g11(), species.g22(), species.g12());
    (0.5 * (g11 - g22), 0.5 * (g11 + g22) - g12)
}

/// Longitudinal trap hardness: the exponent `q` of `V_L = k r^q / 2`, or the
/// hard-wall limit `q → ∞` at fixed `r₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hardness {
    Power(u32),
    HardWall,
}

impl Hardness {
    pub const HARMONIC: Hardness = Hardness::Power(2);

    /// `1/q`, zero in the hard-wall limit. Every closed form in this crate is
    /// written in terms of this quantity so the limit is analytic.
    pub fn inv_q(self) -> f64 {
        match self {
            Hardness::Power(q) => 1.0 / f64::from(q),
            Hardness::HardWall => 0.0,
        }
    }

    /// `q` as a float, `+∞` for a hard wall.
    pub fn q(self) -> f64 {
        match self {
            Hardness::Power(q) => f64::from(q),
            Hardness::HardWall => f64::INFINITY,
        }
    }

    pub fn is_hard_wall(self) -> bool {
        matches!(self, Hardness::HardWall)
    }
}

impl std::fmt::Display for Hardness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Hardness::Power(q) => write!(f, "{q}"),
            Hardness::HardWall => f.write_str("hard_wall"),
        }
    }
}

/// Volume of the unit ball in `n` dimensions, `V₀ = 1`.
pub fn unit_ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => {
            let nf = f64::from(n);
            PI.powf(nf / 2.0) / statrs::function::gamma::gamma(nf / 2.0 + 1.0)
        }
    }
}

/// Trap loosely confining `d` longitudinal dimensions with a power law and
/// tightly confining `D = 3 − d` transverse dimensions harmonically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapGeometry {
    pub d: u32,
    pub hardness: Hardness,
    /// Longitudinal stiffness in J/m^q; `None` for a hard wall.
    pub k: Option<f64>,
    pub omega_t: f64,
    pub rho0: f64,
    pub r0: f64,
    pub omega_l: f64,
    pub mass: f64,
}

impl TrapGeometry {
    /// Transverse dimension count `D = 3 − d`.
    pub fn big_d(&self) -> u32 {
        3 - self.d
    }

    pub fn d_f64(&self) -> f64 {
        f64::from(self.d)
    }

    pub fn big_d_f64(&self) -> f64 {
        f64::from(self.big_d())
    }

    pub fn inv_q(&self) -> f64 {
        self.hardness.inv_q()
    }
}

fn check_dimension(d: u32) -> Result<()> {
    if !(1..=3).contains(&d) {
        return domain(format!("longitudinal dimension must be 1, 2 or 3, got {d}"));
    }
    Ok(())
}

fn warn_if_not_elongated(rho0: f64, r0: f64) {
    if r0 <= rho0 {
        log::warn!(
            "r0 = {r0:e} m is not larger than rho0 = {rho0:e} m; \
             the transverse/longitudinal separation assumed by the scaling laws does not hold"
        );
    }
}

/// Builds a trap from its bare half-widths:
/// `ρ₀² = ħ/2mω_T`, `r₀^{q+2} = ħ²/mk`, `ω_L = ħ/m r₀²`.
pub fn trap_from_lengths(d: u32, hardness: Hardness, rho0: f64, r0: f64, mass: f64) -> Result<TrapGeometry> {
    check_dimension(d)?;
    if let Hardness::Power(q) = hardness {
        if q < 1 {
            return domain("trap exponent q must be at least 1");
        }
    }
    if !(rho0 > 0.0) || !(r0 > 0.0) || !(mass > 0.0) {
        return domain("trap lengths and mass must be positive");
    }
    warn_if_not_elongated(rho0, r0);
    let omega_t = HBAR / (2.0 * mass * rho0 * rho0);
    let k = match hardness {
        Hardness::Power(q) => Some(HBAR * HBAR / (mass * r0.powi(q as i32 + 2))),
        Hardness::HardWall => None,
    };
    Ok(TrapGeometry { d, hardness, k, omega_t, rho0, r0, omega_l: HBAR / (mass * r0 * r0), mass })
}

/// Inverse of [`trap_from_lengths`] for a finite power law: builds the trap
/// from the stiffness `k` and transverse angular frequency `ω_T`.
pub fn trap_from_stiffness(d: u32, q: u32, k: f64, omega_t: f64, mass: f64) -> Result<TrapGeometry> {
    check_dimension(d)?;
    if q < 1 {
        return domain("trap exponent q must be at least 1");
    }
    if !(k > 0.0) || !(omega_t > 0.0) || !(mass > 0.0) {
        return domain("stiffness, frequency and mass must be positive");
    }
    let rho0 = (HBAR / (2.0 * mass * omega_t)).sqrt();
    let r0 = (HBAR * HBAR / (mass * k)).powf(1.0 / f64::from(q + 2));
    warn_if_not_elongated(rho0, r0);
    Ok(TrapGeometry {
        d,
        hardness: Hardness::Power(q),
        k: Some(k),
        omega_t,
        rho0,
        r0,
        omega_l: HBAR / (mass * r0 * r0),
        mass,
    })
}

/// Real single-atom amplitudes `c₁|1⟩ + c₂|2⟩` produced by the first pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Superposition {
    pub c1: f64,
    pub c2: f64,
}

impl Superposition {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if ((c1 * c1 + c2 * c2) - 1.0).abs() > 1e-12 {
            return domain(format!("superposition not normalized: c1² + c2² = {}", c1 * c1 + c2 * c2));
        }
        Ok(Self { c1, c2 })
    }

    /// Amplitudes `(cos θ/2, sin θ/2)` for polar angle `θ`.
    pub fn from_polar(theta: f64) -> Self {
        Self { c1: (0.5 * theta).cos(), c2: (0.5 * theta).sin() }
    }

    /// `(|1⟩ + |2⟩)/√2`.
    pub fn equal() -> Self {
        Self { c1: std::f64::consts::FRAC_1_SQRT_2, c2: std::f64::consts::FRAC_1_SQRT_2 }
    }

    /// `cos(π/8)|1⟩ + sin(π/8)|2⟩`, the optimal product input for `J_z²`.
    pub fn pi_over_8() -> Self {
        Self { c1: (PI / 8.0).cos(), c2: (PI / 8.0).sin() }
    }
}
