//! Browser bindings behind the demo page in `www/`. Each function returns a
//! flat array of interleaved samples ready for plotting.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use bec_metrology::physical::{trap_from_lengths, Hardness, Species, Superposition};
use bec_metrology::scaling::{critical_numbers, scaling_exponent_real, RegimeLabel};
use bec_metrology::spin::{scaling_sweep, ProtocolKind};
use bec_metrology::thomas_fermi::{fringe_probabilities, overlap_gaussian, phase_dynamics};
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn to_js(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Intermediate-regime exponent `ξ` at `points` hardness values spaced
/// evenly in `1/q` from 1 down to 0, as interleaved `(q, ξ)` pairs. The last
/// pair is the hard wall, reported with `q = ∞`.
pub fn xi_curve(d: u32, points: usize) -> Result<Vec<f64>, String> {
    if !(1..=3).contains(&d) || points < 2 {
        return Err(err("need d in 1..=3 and at least two points"));
    }
    let mut out = Vec::with_capacity(2 * points);
    for i in 0..points {
        let inv_q = 1.0 - i as f64 / (points - 1) as f64;
        let q = 1.0 / inv_q;
        out.push(q);
        out.push(scaling_exponent_real(d, q, RegimeLabel::Intermediate));
    }
    Ok(out)
}

/// Simulated `δγ·t` at `N = 2, 4, …, 2^max_log2` for one protocol
/// (`ramsey`, `cat`, `enhanced_NJz` or `product_Jz2`), as interleaved
/// `(N, δγ)` pairs at `t = 1`.
pub fn sensitivity_curve(protocol: &str, max_log2: u32) -> Result<Vec<f64>, String> {
    let kind = ProtocolKind::ALL
        .into_iter()
        .find(|k| k.name() == protocol)
        .ok_or_else(|| err(format!("unknown protocol {protocol:?}")))?;
    if !(1..=12).contains(&max_log2) {
        return Err(err("max_log2 must be between 1 and 12"));
    }
    let ns: Vec<usize> = (1..=max_log2).map(|k| 1usize << k).collect();
    let (rows, _) = scaling_sweep(kind, &ns, 1.0, 1e-3).map_err(err)?;
    Ok(rows.iter().flat_map(|r| [r.n_atoms as f64, r.delta_gamma]).collect())
}

/// Thomas-Fermi overlap of a ⁸⁷Rb condensate with `N = n_over_nl·N_L`
/// atoms in a `d`-dimensional trap of hardness `q` (`ρ₀ = 1 μm`,
/// `r₀ = 100 μm`), sampled at `points` times up to `Ω_N t = omega_t_max`.
/// Returns interleaved `(Ω_N t, |overlap|, P₁)` triples.
pub fn visibility_curve(d: u32, q: u32, n_over_nl: f64, omega_t_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 || !(omega_t_max > 0.0) || !(n_over_nl >= 1.0) {
        return Err(err("need points ≥ 2, omega_t_max > 0 and n_over_nl ≥ 1"));
    }
    let species = Species::rb87();
    let geom = trap_from_lengths(d, Hardness::Power(q), 1e-6, 1e-4, species.mass).map_err(err)?;
    let n_lower = critical_numbers(&geom, species.a11).map_err(err)?.n_lower;
    let n = 1.0 + n_over_nl * (n_lower - 1.0);
    let sup = Superposition::equal();
    let phase = phase_dynamics(&geom, &species, n, sup).map_err(err)?;
    let omega = phase.omega_n.abs();
    let mut out = Vec::with_capacity(3 * points);
    for i in 0..points {
        let wt = omega_t_max * i as f64 / (points - 1) as f64;
        let overlap = overlap_gaussian(&phase, wt / omega).map_err(err)?;
        let (p1, _) = fringe_probabilities(sup, overlap).map_err(err)?;
        out.extend([wt, overlap.norm(), p1]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = xiCurve)]
pub fn xi_curve_js(d: u32, points: usize) -> Result<Vec<f64>, JsError> {
    to_js(xi_curve(d, points))
}

#[wasm_bindgen(js_name = sensitivityCurve)]
pub fn sensitivity_curve_js(protocol: &str, max_log2: u32) -> Result<Vec<f64>, JsError> {
    to_js(sensitivity_curve(protocol, max_log2))
}

#[wasm_bindgen(js_name = visibilityCurve)]
pub fn visibility_curve_js(
    d: u32,
    q: u32,
    n_over_nl: f64,
    omega_t_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    to_js(visibility_curve(d, q, n_over_nl, omega_t_max, points))
}
