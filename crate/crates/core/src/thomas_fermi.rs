//! Thomas-Fermi profiles of a condensate in a power-law trap, the integrals
//! over them, and the resulting phase dynamics and fringe signal.
//!
//! `J_l(d, q) = ∫₀¹ u^{d−1}(1 − u^q)^l du = Γ(d/q)Γ(l+1) / (q Γ(d/q + l + 1))`.
//! `q = ∞` stands for a hard wall, where `J_l = 1/d`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::physical::{josephson_couplings, unit_ball_volume, Species, Superposition, TrapGeometry, HBAR};
use crate::scaling::{critical_numbers, eta_transverse, RegimeLabel};
use crate::special::ln_gamma;

fn check_l(l: f64) -> Result<()> {
    if !(l > -1.0) {
        return domain(format!("J_l needs l > −1, got {l}"));
    }
    Ok(())
}

/// Gamma-function form, valid for every `l > −1`.
pub fn j_integral_gamma(l: f64, d: f64, q: f64) -> Result<f64> {
    check_l(l)?;
    if q.is_infinite() {
        return Ok(1.0 / d);
    }
    let x = d / q;
    Ok((ln_gamma(x) + ln_gamma(l + 1.0) - ln_gamma(x + l + 1.0)).exp() / q)
}

/// Factorial form `l! q^l / (d(d+q)…(d+lq))` for nonnegative integer `l`.
pub fn j_integral_factorial(l: u32, d: f64, q: f64) -> f64 {
    if q.is_infinite() {
        return 1.0 / d;
    }
    // l!q^l/∏(d+jq) = (1/d) ∏_{j=1}^{l} j/(d/q + j)
    let x = d / q;
    (1..=l).fold(1.0 / d, |acc, j| acc * f64::from(j) / (x + f64::from(j)))
}

/// Harmonic form `Γ(d/2)Γ(l+1) / (2Γ(d/2+l+1))`.
pub fn j_integral_q2(l: f64, d: f64) -> Result<f64> {
    check_l(l)?;
    Ok(0.5 * (ln_gamma(0.5 * d) + ln_gamma(l + 1.0) - ln_gamma(0.5 * d + l + 1.0)).exp())
}

/// `J_l(d, q)`, using the factorial form at integer `l`.
pub fn j_integral(l: f64, d: f64, q: f64) -> Result<f64> {
    check_l(l)?;
    if l.fract() == 0.0 && (0.0..171.0).contains(&l) {
        return Ok(j_integral_factorial(l as u32, d, q));
    }
    j_integral_gamma(l, d, q)
}

/// `J_{x+l}/J_x = ∏_{j=1}^{l} (x+j)/(d/q + x + j)` for integer `l ≥ 0`.
pub fn j_ratio(x: f64, l: u32, d: f64, q: f64) -> f64 {
    let s = if q.is_infinite() { 0.0 } else { d / q };
    (1..=l).fold(1.0, |acc, j| acc * (x + f64::from(j)) / (s + x + f64::from(j)))
}

fn sphere_area(d: u32) -> f64 {
    f64::from(d) * unit_ball_volume(d)
}

fn check_n(n_atoms: f64) -> Result<()> {
    if !(n_atoms > 1.0) {
        return domain(format!("Thomas-Fermi profiles need N > 1, got {n_atoms}"));
    }
    Ok(())
}

/// The intermediate-regime profile `|φ|² = A (1 − (r/r̃)^q)` in terms of its
/// radius `r̃` and peak density `A = μ_L / ((N−1) g η_T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntermediateShape {
    pub d: u32,
    pub q: f64,
    pub r_tilde: f64,
    pub peak: f64,
}

impl IntermediateShape {
    pub fn new(geom: &TrapGeometry, a: f64, n_atoms: f64) -> Result<Self> {
        check_n(n_atoms)?;
        let crit = critical_numbers(geom, a)?;
        let d = geom.d_f64();
        let iq = geom.inv_q();
        let ratio = (n_atoms - 1.0) / (crit.n_lower - 1.0);
        // r̃/r₀ = ((d+q)/q · ratio)^{1/(d+q)}
        let r_tilde = geom.r0 * ((1.0 + d * iq) * ratio).powf(iq / (1.0 + d * iq));
        let peak = (1.0 + d * iq) / (unit_ball_volume(geom.d) * r_tilde.powf(d));
        Ok(Self { d: geom.d, q: geom.hardness.q(), r_tilde, peak })
    }

    /// `I_l = A^l r̃^d S_{d−1} J_l(d, q)`.
    pub fn i_integral(&self, l: f64) -> Result<f64> {
        Ok(self.peak.powf(l)
            * self.r_tilde.powi(self.d as i32)
            * sphere_area(self.d)
            * j_integral(l, f64::from(self.d), self.q)?)
    }

    /// Density at radius `r`.
    pub fn density(&self, r: f64) -> f64 {
        if r >= self.r_tilde {
            return 0.0;
        }
        if self.q.is_infinite() {
            return self.peak;
        }
        self.peak * (1.0 - (r / self.r_tilde).powf(self.q))
    }
}

/// `I_l` for the intermediate Thomas-Fermi profile, in m^{−d(l−1)}.
pub fn i_integral(l: f64, n_atoms: f64, geom: &TrapGeometry, a: f64) -> Result<f64> {
    IntermediateShape::new(geom, a, n_atoms)?.i_integral(l)
}

/// The full-regime profile
/// `|ψ|² = B (1 − ρ²/ρ̃² − (k/mω_T²) r^q/ρ̃²)` with `B = μ_N/((N−1)g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullShape {
    pub d: u32,
    pub q: f64,
    pub rho_tilde: f64,
    pub r_tilde: f64,
    pub peak: f64,
    /// `(mω_T²/k)^{d/q}`, finite in the hard-wall limit.
    stiffness_factor: f64,
}

impl FullShape {
    pub fn new(geom: &TrapGeometry, g: f64, n_atoms: f64) -> Result<Self> {
        check_n(n_atoms)?;
        if geom.d == 3 {
            return Err(Error::NotApplicable("the full Thomas-Fermi regime needs d ∈ {1, 2}".into()));
        }
        let d = geom.d_f64();
        let big_d = geom.big_d();
        let iq = geom.inv_q();
        let (r0, rho0) = (geom.r0, geom.rho0);
        // mω_T²/k = r₀^{q+2}/(4ρ₀⁴), raised to d/q.
        let stiffness_factor = r0.powf(d * (1.0 + 2.0 * iq)) * (4.0 * rho0.powi(4)).powf(-d * iq);
        let m_omega2 = HBAR * HBAR / (4.0 * geom.mass * rho0.powi(4));
        let x = d * iq;
        let js = j_integral(1.0 + x, f64::from(big_d), 2.0)? * j_integral(1.0, d, geom.hardness.q())?;
        let areas = sphere_area(big_d) * sphere_area(geom.d);
        // K₁ = 1 with B = ½mω_T²ρ̃²/((N−1)g).
        let exponent = 5.0 - d + 2.0 * x;
        let rho_tilde = ((n_atoms - 1.0) * g / (0.5 * m_omega2 * stiffness_factor * areas * js)).powf(1.0 / exponent);
        let r_tilde = r0 * ((r0 / (2.0 * rho0)) * (rho_tilde / rho0)).powf(2.0 * iq);
        let peak = 0.5 * m_omega2 * rho_tilde * rho_tilde / ((n_atoms - 1.0) * g);
        Ok(Self { d: geom.d, q: geom.hardness.q(), rho_tilde, r_tilde, peak, stiffness_factor })
    }

    /// `K_l = B^l (mω_T²/k)^{d/q} ρ̃^{D+2d/q} S_{D−1} S_{d−1} J_{l+d/q}(D,2) J_l(d,q)`.
    pub fn k_integral(&self, l: f64) -> Result<f64> {
        let d = f64::from(self.d);
        let big_d = 3 - self.d;
        let x = if self.q.is_infinite() { 0.0 } else { d / self.q };
        Ok(self.peak.powf(l)
            * self.stiffness_factor
            * self.rho_tilde.powf(f64::from(big_d) + 2.0 * x)
            * sphere_area(big_d)
            * sphere_area(self.d)
            * j_integral(l + x, f64::from(big_d), 2.0)?
            * j_integral(l, d, self.q)?)
    }

    /// Density at transverse radius `ρ` and longitudinal radius `r`.
    pub fn density(&self, rho: f64, r: f64) -> f64 {
        let transverse = 1.0 - (rho / self.rho_tilde).powi(2);
        if transverse <= 0.0 {
            return 0.0;
        }
        let r_edge = self.r_tilde * transverse.powf(if self.q.is_infinite() { 0.0 } else { 1.0 / self.q });
        if r >= r_edge {
            return 0.0;
        }
        let longitudinal = if self.q.is_infinite() { 0.0 } else { (r / self.r_tilde).powf(self.q) };
        self.peak * (transverse - longitudinal)
    }
}

/// `K_l` for the full Thomas-Fermi profile, in m^{−3(l−1)}.
pub fn k_integral(l: f64, n_atoms: f64, geom: &TrapGeometry, species: &Species) -> Result<f64> {
    FullShape::new(geom, species.g11(), n_atoms)?.k_integral(l)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TfProfile {
    pub regime: RegimeLabel,
    pub mu: f64,
    pub r_tilde: f64,
    pub rho_tilde: Option<f64>,
    pub eta_l: Option<f64>,
    pub eta_t: Option<f64>,
    pub eta_n: f64,
    /// Set when `N` is not safely inside the requested regime.
    pub regime_warning: Option<String>,
}

/// Thomas-Fermi profile of the condensate in mode 1.
pub fn tf_profile(geom: &TrapGeometry, species: &Species, n_atoms: f64, regime: RegimeLabel) -> Result<TfProfile> {
    check_n(n_atoms)?;
    let g = species.g11();
    let crit = critical_numbers(geom, species.a11)?;
    match regime {
        RegimeLabel::Intermediate => {
            let shape = IntermediateShape::new(geom, species.a11, n_atoms)?;
            let eta_t = eta_transverse(geom);
            let eta_l = shape.i_integral(2.0)?;
            let mut warning = None;
            if n_atoms < 10.0 * crit.n_lower {
                warning = Some(format!(
                    "N = {n_atoms:.4e} is not ≫ N_L = {:.4e}; kinetic energy is not negligible",
                    crit.n_lower
                ));
            } else if let Some(nt) = crit.n_upper.filter(|nt| n_atoms > nt / 10.0) {
                warning = Some(format!("N = {n_atoms:.4e} is not ≪ N_T = {nt:.4e}"));
            }
            Ok(TfProfile {
                regime,
                mu: shape.peak * (n_atoms - 1.0) * g * eta_t,
                r_tilde: shape.r_tilde,
                rho_tilde: None,
                eta_l: Some(eta_l),
                eta_t: Some(eta_t),
                eta_n: eta_t * eta_l,
                regime_warning: warning,
            })
        }
        RegimeLabel::FullTf => {
            let shape = FullShape::new(geom, g, n_atoms)?;
            let nt = crit.n_upper.expect("d < 3");
            let warning = (n_atoms < 10.0 * nt)
                .then(|| format!("N = {n_atoms:.4e} is not ≫ N_T = {nt:.4e}; transverse kinetic energy matters"));
            Ok(TfProfile {
                regime,
                mu: shape.peak * (n_atoms - 1.0) * g,
                r_tilde: shape.r_tilde,
                rho_tilde: Some(shape.rho_tilde),
                eta_l: None,
                eta_t: None,
                eta_n: shape.k_integral(2.0)?,
                regime_warning: warning,
            })
        }
        RegimeLabel::Bare => Err(Error::NotApplicable("no Thomas-Fermi profile below N_L".into())),
    }
}

/// `Ω_N τ_pd = η_L / √M` with `M = ∫q₀(q₀ − η_L)² = I₃ − η_L²`, which reduces
/// to `√(2(d+3q)/d)`. Infinite for a hard wall, whose density is flat.
pub fn omega_tau(d: u32, q: f64) -> f64 {
    let df = f64::from(d);
    if q.is_infinite() {
        return f64::INFINITY;
    }
    let j1 = j_integral_factorial(1, df, q);
    let j2 = j_integral_factorial(2, df, q);
    let j3 = j_integral_factorial(3, df, q);
    // Scale-free: with A = 1 and r̃ fixed by I₁ = 1, I_l = J_l/J_1.
    let eta = j2 / j1;
    let m = j3 / j1 - eta * eta;
    eta / m.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseDynamics {
    pub omega_n: f64,
    /// `None` when `Δg = 0`, so no phase accumulates.
    pub tau_pd: Option<f64>,
    pub delta_g: f64,
}

/// `Δg = γ₁ + (c₁² − c₂²) γ₂`.
pub fn delta_g(species: &Species, sup: Superposition) -> f64 {
    let (g1, g2) = josephson_couplings(species);
    g1 + (sup.c1 * sup.c1 - sup.c2 * sup.c2) * g2
}

/// `Ω_N = (N−1) η_N Δg / ħ` from the intermediate TF density, with `τ_pd`.
pub fn phase_dynamics(
    geom: &TrapGeometry,
    species: &Species,
    n_atoms: f64,
    sup: Superposition,
) -> Result<PhaseDynamics> {
    let profile = tf_profile(geom, species, n_atoms, RegimeLabel::Intermediate)?;
    let dg = delta_g(species, sup);
    let omega_n = (n_atoms - 1.0) * profile.eta_n * dg / HBAR;
    let tau_pd = (omega_n != 0.0).then(|| omega_tau(geom.d, geom.hardness.q()) / omega_n.abs());
    Ok(PhaseDynamics { omega_n, tau_pd, delta_g: dg })
}

/// Closed form `Ω_N/ω_L = (Δg/g₁₁)(q/(d+2q))((d+q)/q · (N−1)/(N_L−1))^{q/(d+q)}`.
pub fn omega_n_closed_form(geom: &TrapGeometry, species: &Species, n_atoms: f64, sup: Superposition) -> Result<f64> {
    check_n(n_atoms)?;
    let crit = critical_numbers(geom, species.a11)?;
    let d = geom.d_f64();
    let iq = geom.inv_q();
    let ratio = (n_atoms - 1.0) / (crit.n_lower - 1.0);
    let q_over_d2q = 1.0 / (d * iq + 2.0);
    let exponent = 1.0 / (1.0 + d * iq);
    Ok(geom.omega_l * delta_g(species, sup) / species.g11() * q_over_d2q * ((1.0 + d * iq) * ratio).powf(exponent))
}

/// `e^{−iΩ_N t − (Ω_N t)²/(2(Ω_N τ_pd)²)}`.
pub fn overlap_gaussian(phase: &PhaseDynamics, t: f64) -> Result<C64> {
    if !(t >= 0.0) {
        return domain(format!("time must be non-negative, got {t}"));
    }
    let wt = phase.omega_n * t;
    let magnitude = match phase.tau_pd {
        Some(tau) if tau.is_finite() => (-0.5 * (t / tau).powi(2)).exp(),
        _ => 1.0,
    };
    Ok(C64::from_polar(magnitude, -wt))
}

/// `p_{1,2} = (1 ∓ 2c₁c₂ Im⟨ψ₂|ψ₁⟩)/2`.
pub fn fringe_probabilities(sup: Superposition, overlap: C64) -> Result<(f64, f64)> {
    if overlap.norm() > 1.0 + 1e-9 {
        return domain(format!("overlap magnitude {} exceeds 1", overlap.norm()));
    }
    let s = 2.0 * sup.c1 * sup.c2 * overlap.im;
    Ok((0.5 * (1.0 - s), 0.5 * (1.0 + s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physical::{trap_from_lengths, Hardness};

    #[test]
    fn j_closed_forms() {
        for d in [1.0, 2.0, 3.0] {
            for q in [1.0, 2.0, 4.0, 10.0, f64::INFINITY] {
                assert!((j_integral(0.0, d, q).unwrap() - 1.0 / d).abs() < 1e-15);
            }
        }
        assert!((j_integral(1.0, 1.0, 2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((j_integral_factorial(2, 1.0, 2.0) - 8.0 / 15.0).abs() < 1e-15);
        assert!((j_integral_q2(2.0, 1.0).unwrap() - 8.0 / 15.0).abs() < 1e-14);
        assert!((j_integral_gamma(2.0, 1.0, 2.0).unwrap() - 8.0 / 15.0).abs() < 1e-14);
        assert!(j_integral(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn omega_tau_values() {
        assert!((omega_tau(1, 10.0) - 62f64.sqrt()).abs() < 1e-12);
        assert!((omega_tau(1, 2.0) - 14f64.sqrt()).abs() < 1e-12);
        for d in 1..=3 {
            for q in [1.0, 3.0, 7.0] {
                let expected = (2.0 * (f64::from(d) + 3.0 * q) / f64::from(d)).sqrt();
                assert!((omega_tau(d, q) - expected).abs() < 1e-12);
            }
        }
        assert!(omega_tau(2, f64::INFINITY).is_infinite());
    }

    #[test]
    fn intermediate_normalization_and_eta() {
        let sp = Species::rb87();
        let g = trap_from_lengths(1, Hardness::HARMONIC, 1e-6, 100e-6, sp.mass).unwrap();
        let crit = critical_numbers(&g, sp.a11).unwrap();
        let n = 1.0 + 1000.0 * (crit.n_lower - 1.0);
        assert!((i_integral(1.0, n, &g, sp.a11).unwrap() - 1.0).abs() < 1e-12);
        let eta_l = i_integral(2.0, n, &g, sp.a11).unwrap();
        let bare = 1.0 / (2.0 * g.r0);
        let expected = 0.8 * 1.5f64.powf(2.0 / 3.0) * 0.1;
        assert!((eta_l / bare - expected).abs() < 1e-12);
    }

    #[test]
    fn two_radius_definitions() {
        let sp = Species::typical();
        for (d, q) in [(1, 2), (2, 3), (3, 2)] {
            let g = trap_from_lengths(d, Hardness::Power(q), 1e-6, 100e-6, sp.mass).unwrap();
            let n = 5e4;
            let rt = IntermediateShape::new(&g, sp.a11, n).unwrap().r_tilde;
            let rn = crate::scaling::longitudinal_radius(&g, sp.a11, n).unwrap();
            let expected = ((f64::from(d + q)) / f64::from(q)).powf(1.0 / f64::from(d + q));
            assert!((rt / rn - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn full_normalization() {
        let sp = Species::typical();
        for (d, h) in
            [(1, Hardness::HARMONIC), (2, Hardness::HARMONIC), (1, Hardness::HardWall), (2, Hardness::Power(4))]
        {
            let g = trap_from_lengths(d, h, 1e-6, 100e-6, sp.mass).unwrap();
            let k1 = k_integral(1.0, 1e12, &g, &sp).unwrap();
            assert!((k1 - 1.0).abs() < 1e-12, "d = {d}, {h:?}: {k1}");
        }
    }

    #[test]
    fn phase_dynamics_rb87() {
        let sp = Species::rb87();
        let g = trap_from_lengths(1, Hardness::HARMONIC, 1e-6, 100e-6, sp.mass).unwrap();
        let crit = critical_numbers(&g, sp.a11).unwrap();
        let n = 1.0 + 1000.0 * (crit.n_lower - 1.0);
        let sup = Superposition::equal();
        let pd = phase_dynamics(&g, &sp, n, sup).unwrap();
        assert_eq!(pd.delta_g, josephson_couplings(&sp).0);
        let closed = omega_n_closed_form(&g, &sp, n, sup).unwrap();
        assert!((pd.omega_n - closed).abs() / closed < 1e-12);
        assert!((pd.omega_n * pd.tau_pd.unwrap() - 14f64.sqrt()).abs() < 1e-12);
        let sym = Species::typical();
        let pd0 = phase_dynamics(&g, &sym, 1e4, sup).unwrap();
        assert_eq!(pd0.omega_n, 0.0);
        assert!(pd0.tau_pd.is_none());
    }

    #[test]
    fn overlap_and_fringes() {
        let pd = PhaseDynamics { omega_n: 3.0, tau_pd: Some(2.0), delta_g: 1.0 };
        assert_eq!(overlap_gaussian(&pd, 0.0).unwrap(), C64::new(1.0, 0.0));
        assert!((overlap_gaussian(&pd, 2.0).unwrap().norm() - (-0.5f64).exp()).abs() < 1e-15);
        let o = overlap_gaussian(&pd, 0.7).unwrap();
        assert!((o.arg() - (-2.1)).abs() < 1e-15);

        let eq = Superposition::equal();
        assert_eq!(fringe_probabilities(eq, C64::new(1.0, 0.0)).unwrap(), (0.5, 0.5));
        let (p1, p2) = fringe_probabilities(eq, C64::new(0.0, -1.0)).unwrap();
        assert!((p1 - 1.0).abs() < 1e-15 && p2.abs() < 1e-15);
        let single = Superposition::new(1.0, 0.0).unwrap();
        assert_eq!(fringe_probabilities(single, C64::new(0.3, -0.4)).unwrap().0, 0.5);
        assert!(fringe_probabilities(eq, C64::new(1.0, 0.1)).is_err());
    }

    #[test]
    fn weak_coupling_warns() {
        let mut sp = Species::typical();
        sp.a11 = 1e-15;
        let g = trap_from_lengths(1, Hardness::HARMONIC, 1e-6, 100e-6, sp.mass).unwrap();
        let p = tf_profile(&g, &sp, 1e3, RegimeLabel::Intermediate).unwrap();
        assert!(p.regime_warning.is_some());
    }
}
