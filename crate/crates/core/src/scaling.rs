//! Critical atom numbers, cloud radii, `η_N` estimates and the sensitivity
//! exponent `ξ` of a condensate in a power-law trap.
//!
//! Exponents are written in terms of `1/q` so the hard-wall limit is exact.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::physical::{unit_ball_volume, Hardness, TrapGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryFactors {
    pub v_d: f64,
    pub s_dminus1: f64,
    pub beta_d: f64,
}

impl GeometryFactors {
    /// `V_d`, `S_{d−1} = d V_d` and `β_d = V_d / (2 (4π)^{(d−1)/2})`.
    pub fn new(d: u32) -> Self {
        let v_d = unit_ball_volume(d);
        let beta_d = v_d / (2.0 * (4.0 * std::f64::consts::PI).powf(0.5 * (f64::from(d) - 1.0)));
        Self { v_d, s_dminus1: f64::from(d) * v_d, beta_d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalNumbers {
    pub n_lower: f64,
    /// Absent for `d = 3`, where there is no transverse direction to spread into.
    pub n_upper: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeLabel {
    Bare,
    Intermediate,
    FullTf,
}

impl RegimeLabel {
    pub fn name(self) -> &'static str {
        match self {
            RegimeLabel::Bare => "bare",
            RegimeLabel::Intermediate => "intermediate",
            RegimeLabel::FullTf => "full_TF",
        }
    }
}

fn check_a(a: f64) -> Result<()> {
    if !(a > 0.0) {
        return domain(format!("scattering length must be positive, got {a:e}"));
    }
    Ok(())
}

/// `N_L − 1 = β_d (r₀/a)(ρ₀/r₀)^D` and
/// `N_T − 1 = β_d (ρ₀/a)(r₀/ρ₀)^{d(q+2)/q}`.
pub fn critical_numbers(geom: &TrapGeometry, a: f64) -> Result<CriticalNumbers> {
    check_a(a)?;
    let beta = GeometryFactors::new(geom.d).beta_d;
    let (rho0, r0) = (geom.rho0, geom.r0);
    let n_lower = 1.0 + beta * (r0 / a) * (rho0 / r0).powi(geom.big_d() as i32);
    let n_upper = if geom.d == 3 {
        None
    } else {
        let exponent = geom.d_f64() * (1.0 + 2.0 * geom.inv_q());
        Some(1.0 + beta * (rho0 / a) * (r0 / rho0).powf(exponent))
    };
    Ok(CriticalNumbers { n_lower, n_upper })
}

fn check_n(n_atoms: f64) -> Result<()> {
    if !(n_atoms >= 1.0) {
        return domain(format!("atom number must be at least 1, got {n_atoms}"));
    }
    Ok(())
}

/// `1/(d+q)` written as `(1/q)/(d/q + 1)`.
fn inv_d_plus_q(d: f64, iq: f64) -> f64 {
    iq / (d * iq + 1.0)
}

/// Intermediate-regime half-width `r_N = r₀ ((N−1)/(N_L−1))^{1/(d+q)}`.
pub fn longitudinal_radius(geom: &TrapGeometry, a: f64, n_atoms: f64) -> Result<f64> {
    check_n(n_atoms)?;
    let crit = critical_numbers(geom, a)?;
    if n_atoms < crit.n_lower {
        log::debug!("longitudinal_radius: N = {n_atoms} is below N_L = {:.3}", crit.n_lower);
    }
    let ratio = (n_atoms - 1.0) / (crit.n_lower - 1.0);
    Ok(geom.r0 * ratio.powf(inv_d_plus_q(geom.d_f64(), geom.inv_q())))
}

/// The same radius written through `N_T`:
/// `r_N = r₀ (r₀/ρ₀)^{2/q} ((N−1)/(N_T−1))^{1/(d+q)}`.
pub fn longitudinal_radius_via_upper(geom: &TrapGeometry, a: f64, n_atoms: f64) -> Result<f64> {
    check_n(n_atoms)?;
    let n_upper =
        critical_numbers(geom, a)?.n_upper.ok_or_else(|| Error::NotApplicable("N_T is undefined for d = 3".into()))?;
    let ratio = (n_atoms - 1.0) / (n_upper - 1.0);
    let iq = geom.inv_q();
    Ok(geom.r0 * (geom.r0 / geom.rho0).powf(2.0 * iq) * ratio.powf(inv_d_plus_q(geom.d_f64(), iq)))
}

/// Longitudinal half-width at `N_T`.
pub fn upper_radius(geom: &TrapGeometry, a: f64) -> Result<f64> {
    let n_upper =
        critical_numbers(geom, a)?.n_upper.ok_or_else(|| Error::NotApplicable("N_T is undefined for d = 3".into()))?;
    longitudinal_radius(geom, a, n_upper)
}

/// `5 − d + 2d/q`.
fn full_denominator(d: f64, iq: f64) -> f64 {
    5.0 - d + 2.0 * d * iq
}

/// Prefactor `4(4π)^{D/2} 2^{2d/q} / V_D` of the transverse radius law.
fn full_prefactor(d: u32, iq: f64) -> f64 {
    let big_d = 3 - d;
    4.0 * (4.0 * std::f64::consts::PI).powf(0.5 * f64::from(big_d)) * 2f64.powf(2.0 * f64::from(d) * iq)
        / unit_ball_volume(big_d)
}

/// Full-regime radii `(r_N, ρ_N)`.
pub fn radii_full(geom: &TrapGeometry, a: f64, n_atoms: f64) -> Result<(f64, f64)> {
    check_n(n_atoms)?;
    if geom.d == 3 {
        return Err(Error::NotApplicable("the full Thomas-Fermi regime needs d ∈ {1, 2}".into()));
    }
    let n_upper = critical_numbers(geom, a)?.n_upper.expect("d < 3");
    if n_atoms < n_upper {
        log::debug!("radii_full: N = {n_atoms} is below N_T = {n_upper:.3e}");
    }
    let iq = geom.inv_q();
    let d = geom.d_f64();
    let rhs = full_prefactor(geom.d, iq) * (n_atoms - 1.0) / (n_upper - 1.0);
    let rho_n = geom.rho0 * rhs.powf(1.0 / full_denominator(d, iq));
    let r_n = geom.r0 * ((geom.r0 / (2.0 * geom.rho0)) * (rho_n / geom.rho0)).powf(2.0 * iq);
    Ok((r_n, rho_n))
}

/// `η_T = (4π)^{−D/2} ρ₀^{−D}`, the transverse Gaussian inverse area/length.
pub fn eta_transverse(geom: &TrapGeometry) -> f64 {
    let big_d = geom.big_d_f64();
    (4.0 * std::f64::consts::PI).powf(-0.5 * big_d) * geom.rho0.powf(-big_d)
}

/// Bare longitudinal estimate `η_L = 1/(V_d r₀^d)`.
pub fn eta_longitudinal_bare(geom: &TrapGeometry) -> f64 {
    1.0 / (unit_ball_volume(geom.d) * geom.r0.powi(geom.d as i32))
}

/// Regime by the thresholds `N ≤ N_L`, `N_L < N ≤ N_T`, `N > N_T`.
pub fn classify(crit: &CriticalNumbers, n_atoms: f64) -> RegimeLabel {
    if n_atoms <= crit.n_lower {
        RegimeLabel::Bare
    } else if crit.n_upper.is_none_or(|nt| n_atoms <= nt) {
        RegimeLabel::Intermediate
    } else {
        RegimeLabel::FullTf
    }
}

/// True when `N` lies within a factor 10 of a regime boundary, where none of
/// the asymptotic forms is reliable.
pub fn near_boundary(crit: &CriticalNumbers, n_atoms: f64) -> bool {
    let near = |b: f64| n_atoms > b / 10.0 && n_atoms < b * 10.0;
    near(crit.n_lower) || crit.n_upper.is_some_and(near)
}

/// Scaling estimate of `η_N` in m⁻³, continuous across both boundaries.
pub fn eta_estimate(geom: &TrapGeometry, a: f64, n_atoms: f64) -> Result<(f64, RegimeLabel)> {
    check_n(n_atoms)?;
    let crit = critical_numbers(geom, a)?;
    let eta0 = eta_transverse(geom) * eta_longitudinal_bare(geom);
    let d = geom.d_f64();
    let iq = geom.inv_q();
    let int_exponent = d * inv_d_plus_q(d, iq);
    let intermediate = |n: f64| eta0 * ((crit.n_lower - 1.0) / (n - 1.0)).powf(int_exponent);
    let regime = classify(&crit, n_atoms);
    let eta = match regime {
        RegimeLabel::Bare => eta0,
        RegimeLabel::Intermediate => intermediate(n_atoms),
        RegimeLabel::FullTf => {
            let nt = crit.n_upper.expect("full regime only exists for d < 3");
            let e = (3.0 - d + 2.0 * d * iq) / full_denominator(d, iq);
            intermediate(nt) * ((nt - 1.0) / (n_atoms - 1.0)).powf(e)
        }
    };
    if near_boundary(&crit, n_atoms) {
        log::debug!("eta_estimate: N = {n_atoms} is within a factor 10 of a regime boundary");
    }
    Ok((eta, regime))
}

/// Exact `ξ` for integer `q` or a hard wall.
///
/// The full-regime value is returned for `d = 3` as well, although such a
/// trap never leaves the intermediate regime.
pub fn scaling_exponent(d: u32, hardness: Hardness, regime: RegimeLabel) -> Result<Ratio<i64>> {
    if !(1..=3).contains(&d) {
        return domain(format!("dimension must be 1, 2 or 3, got {d}"));
    }
    let d = i64::from(d);
    let three_halves = Ratio::new(3, 2);
    Ok(match (regime, hardness) {
        (RegimeLabel::Bare, _) => three_halves,
        (RegimeLabel::Intermediate, Hardness::HardWall) => three_halves,
        (RegimeLabel::Intermediate, Hardness::Power(q)) => {
            let q = i64::from(q);
            Ratio::new(d + 3 * q, 2 * (d + q))
        }
        (RegimeLabel::FullTf, Hardness::HardWall) => three_halves - Ratio::new(3 - d, 5 - d),
        (RegimeLabel::FullTf, Hardness::Power(q)) => {
            let q = i64::from(q);
            three_halves - Ratio::new(q * (3 - d) + 2 * d, q * (5 - d) + 2 * d)
        }
    })
}

/// `ξ` for real `q ≥ 1`; `q = ∞` is the hard wall.
pub fn scaling_exponent_real(d: u32, q: f64, regime: RegimeLabel) -> f64 {
    let d = f64::from(d);
    let iq = if q.is_infinite() { 0.0 } else { 1.0 / q };
    match regime {
        RegimeLabel::Bare => 1.5,
        RegimeLabel::Intermediate => 1.5 - d * inv_d_plus_q(d, iq),
        RegimeLabel::FullTf => 1.5 - (3.0 - d + 2.0 * d * iq) / full_denominator(d, iq),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig1Row {
    pub q: f64,
    pub xi_1d: f64,
    pub xi_2d: f64,
    pub xi_3d: f64,
}

/// Intermediate-regime `ξ` against hardness for 1D, 2D and 3D traps.
pub fn fig1_table(q_values: &[f64]) -> Result<Vec<Fig1Row>> {
    q_values
        .iter()
        .map(|&q| {
            if !(q >= 1.0) {
                return domain(format!("hardness q must be at least 1, got {q}"));
            }
            let xi = |d| scaling_exponent_real(d, q, RegimeLabel::Intermediate);
            Ok(Fig1Row { q, xi_1d: xi(1), xi_2d: xi(2), xi_3d: xi(3) })
        })
        .collect()
}
