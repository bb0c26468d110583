//! Imaginary-time ground states and `η_N` sweeps.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::grid::{Field, Grid, GridKind, Spectral};
use super::{GridPolicy, ReducedUnits};
use crate::error::{domain, Error, Result};
use crate::physical::{Species, TrapGeometry};
use crate::stats::local_loglog_slopes;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateOptions {
    /// Relative energy change per unit imaginary time at which to stop.
    pub tolerance: f64,
    pub max_steps: usize,
    /// Imaginary-time steps in units of `1/E` for the chemical-potential
    /// scale `E`, run in order; only the last stage uses `tolerance`.
    pub stages: Vec<f64>,
    /// Imaginary time between convergence checks.
    pub check_interval: f64,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_steps: 4_000_000, stages: vec![0.1, 0.02, 0.004], check_interval: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateResult {
    pub field: Field,
    /// Chemical potential (J).
    pub mu: f64,
    /// Kinetic plus trap energy per atom (J).
    pub e0: f64,
    /// Longitudinal `η = ∫|ψ|⁴` (m^{−d}).
    pub eta: f64,
    /// `η_N = η_T η` (m^{−3}).
    pub eta_n: f64,
    /// Relative energy change per unit imaginary time at the last check.
    pub residual: f64,
    pub steps: usize,
}

/// Energies of a normalized state in reduced units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Energies {
    pub kinetic: f64,
    pub trap: f64,
    pub eta: f64,
}

impl Energies {
    pub fn functional(&self, kappa: f64) -> f64 {
        self.kinetic + self.trap + 0.5 * kappa * self.eta
    }

    pub fn mu(&self, kappa: f64) -> f64 {
        self.kinetic + self.trap + kappa * self.eta
    }
}

pub(crate) fn energies(grid: &Grid, spectral: &mut Spectral, potential: &[f64], values: &[C64]) -> Energies {
    Energies {
        kinetic: spectral.kinetic_energy(values),
        trap: grid.integrate_density(values, |i, _| potential[i]),
        eta: grid.eta(values),
    }
}

pub(crate) fn check_grid(grid: &Grid, geom: &TrapGeometry) -> Result<()> {
    let expected = match geom.d {
        1 => GridKind::Line,
        2 => GridKind::Plane,
        _ => GridKind::Radial,
    };
    if grid.kind != expected {
        return domain(format!("grid kind {:?} does not match d = {}", grid.kind, geom.d));
    }
    if ((grid.length_unit - geom.r0) / geom.r0).abs() > 1e-12 {
        return domain("grid length unit must equal the trap r0");
    }
    Ok(())
}

fn initial_guess(grid: &Grid, units: &ReducedUnits, potential: &[f64]) -> Vec<C64> {
    let r = grid.radii();
    let x = grid.coordinates();
    let mu = units.potential(units.tf_radius());
    let amplitude = |i: usize| {
        let gauss = (-0.5 * r[i] * r[i]).exp();
        if units.kappa > 1.0 {
            ((mu - potential[i]).max(0.0) / units.kappa).sqrt() + 1e-3 * gauss
        } else {
            gauss
        }
    };
    (0..grid.len())
        .map(|i| {
            let a = amplitude(i);
            let v = if grid.kind == GridKind::Radial { x[i] * a } else { a };
            C64::new(v, 0.0)
        })
        .collect()
}

/// Normalized ground state of the reduced GP equation with coupling
/// `(N−1) g₁₁ η_T`, by imaginary-time split-step propagation.
pub fn ground_state(
    geom: &TrapGeometry,
    species: &Species,
    n_atoms: f64,
    grid: &Grid,
    opts: &GroundStateOptions,
) -> Result<GroundStateResult> {
    check_grid(grid, geom)?;
    if !(opts.tolerance > 0.0) || opts.stages.is_empty() {
        return domain("tolerance must be positive and at least one stage given");
    }
    let units = ReducedUnits::new(geom, species, n_atoms)?;
    let kappa = units.kappa;
    let potential: Vec<f64> = grid.radii().iter().map(|&r| units.potential(r)).collect();
    let mut spectral = Spectral::new(grid);
    let mut field = Field { grid: grid.clone(), values: initial_guess(grid, &units, &potential), n_atoms };
    field.normalize();

    let scale = units.potential(units.tf_radius()).max(0.5 * f64::from(geom.d));
    let mut steps = 0usize;
    let mut residual = f64::INFINITY;
    let w = grid.weight();
    let x = grid.coordinates();
    for (stage, &factor) in opts.stages.iter().enumerate() {
        let last = stage + 1 == opts.stages.len();
        let tol = if last { opts.tolerance } else { opts.tolerance.max(1e-7) };
        let dtau = factor / scale;
        let kinetic = spectral.kinetic_multiplier(C64::new(dtau, 0.0));
        let check_every = ((opts.check_interval / dtau).ceil() as usize).max(10);
        let mut e_prev = energies(grid, &mut spectral, &potential, &field.values).functional(kappa);
        let half_step = |values: &mut [C64]| {
            for (i, v) in values.iter_mut().enumerate() {
                let n = if grid.kind == GridKind::Radial { v.norm_sqr() / (x[i] * x[i]) } else { v.norm_sqr() };
                *v *= (-0.5 * dtau * (potential[i] + kappa * n)).exp();
            }
        };
        loop {
            // Renormalizing after every substep keeps the nonlinear term
            // evaluated on a unit-norm density, which removes an O(dτ) bias.
            let renormalize = |values: &mut [C64]| {
                let s = (w * values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt();
                values.iter_mut().for_each(|v| *v /= s);
            };
            for _ in 0..check_every {
                half_step(&mut field.values);
                renormalize(&mut field.values);
                spectral.apply_multiplier(&mut field.values, &kinetic);
                renormalize(&mut field.values);
                half_step(&mut field.values);
                renormalize(&mut field.values);
            }
            steps += check_every;
            let e = energies(grid, &mut spectral, &potential, &field.values).functional(kappa);
            if !e.is_finite() {
                return Err(Error::Instability("imaginary-time energy is not finite".into()));
            }
            residual = (e - e_prev).abs() / (e.abs().max(1e-300) * dtau * check_every as f64);
            e_prev = e;
            if residual < tol {
                break;
            }
            if steps >= opts.max_steps {
                return Err(Error::NonConvergence { steps, residual });
            }
        }
    }

    let en = energies(grid, &mut spectral, &potential, &field.values);
    let eta = en.eta / geom.r0.powi(geom.d as i32);
    Ok(GroundStateResult {
        field,
        mu: en.mu(kappa) * units.energy,
        e0: (en.kinetic + en.trap) * units.energy,
        eta,
        eta_n: eta * units.eta_t,
        residual,
        steps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaRow {
    pub n_atoms: f64,
    /// `η_N` in m^{−3}.
    pub eta_n: f64,
    /// Centered `d ln η_N / d ln N`.
    pub local_slope: f64,
}

/// Ground states for each `N` (in parallel) with local log-log slopes of `η_N`.
pub fn eta_sweep(
    geom: &TrapGeometry,
    species: &Species,
    n_list: &[f64],
    policy: &GridPolicy,
    opts: &GroundStateOptions,
) -> Result<Vec<EtaRow>> {
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return domain("atom numbers must be strictly ascending");
    }
    let etas = n_list
        .par_iter()
        .map(|&n| {
            let grid = policy.grid_for(geom, species, n)?;
            ground_state(geom, species, n, &grid, opts).map(|g| g.eta_n)
        })
        .collect::<Result<Vec<f64>>>()?;
    let slopes = local_loglog_slopes(n_list, &etas);
    Ok(n_list
        .iter()
        .zip(&etas)
        .zip(&slopes)
        .map(|((&n_atoms, &eta_n), &local_slope)| EtaRow { n_atoms, eta_n, local_slope })
        .collect())
}
