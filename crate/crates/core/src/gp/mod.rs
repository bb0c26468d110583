//! Gross-Pitaevskii machinery on a grid: imaginary-time ground states,
//! numerical `η_N`, and real-time two-mode evolution with optional
//! spin-exchange loss.
//!
//! The longitudinal problem is solved in reduced units (length `r₀`, energy
//! `ħω_L`, time `1/ω_L`) with trap `½ r^q`. For `d < 3` the transverse
//! ground state is integrated out, which multiplies the coupling by `η_T`.

mod evolve;
mod grid;
mod ground;
mod snapshot;

pub use evolve::{evolve_two_mode, loss_budget, EvolutionOptions, EvolutionRecord, LossBudget};
pub use grid::{Field, Grid, GridKind, Spectral};
pub use ground::{eta_sweep, ground_state, EtaRow, GroundStateOptions, GroundStateResult};
pub use snapshot::{read_field, write_field};

use crate::error::{domain, Error, Result};
use crate::physical::{unit_ball_volume, Hardness, Species, TrapGeometry, HBAR};
use crate::scaling::eta_transverse;

/// Conversion between SI and the reduced units of the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedUnits {
    /// `r₀` in metres.
    pub length: f64,
    /// `1/ω_L` in seconds.
    pub time: f64,
    /// `ħω_L` in joules.
    pub energy: f64,
    /// `q` of the longitudinal power law.
    pub q: u32,
    pub d: u32,
    /// `η_T` in m^{−D}.
    pub eta_t: f64,
    /// `(N−1) g₁₁ η_T / (r₀^d ħω_L)`, equal to `½ V_d (N−1)/(N_L−1)`.
    pub kappa: f64,
}

impl ReducedUnits {
    pub fn new(geom: &TrapGeometry, species: &Species, n_atoms: f64) -> Result<Self> {
        let q = match geom.hardness {
            Hardness::Power(q) => q,
            Hardness::HardWall => {
                return Err(Error::Unsupported(
                    "hard-wall traps have no grid solver; use the Thomas-Fermi results".into(),
                ))
            }
        };
        if !(n_atoms >= 1.0) {
            return domain(format!("atom number must be at least 1, got {n_atoms}"));
        }
        let g = species.g11();
        if g < 0.0 {
            return Err(Error::Unsupported("attractive interactions".into()));
        }
        let eta_t = eta_transverse(geom);
        let energy = HBAR * geom.omega_l;
        let kappa = (n_atoms - 1.0) * g * eta_t / (geom.r0.powi(geom.d as i32) * energy);
        Ok(Self { length: geom.r0, time: 1.0 / geom.omega_l, energy, q, d: geom.d, eta_t, kappa })
    }

    /// Dimensionless trap potential `½ r^q`.
    pub fn potential(&self, r: f64) -> f64 {
        0.5 * r.powi(self.q as i32)
    }

    /// Thomas-Fermi radius in units of `r₀`, `((d+q)/q · 2κ/V_d)^{1/(d+q)}`.
    pub fn tf_radius(&self) -> f64 {
        let (d, q) = (f64::from(self.d), f64::from(self.q));
        let ratio = 2.0 * self.kappa / unit_ball_volume(self.d);
        ((d + q) / q * ratio).powf(1.0 / (d + q))
    }

    /// Radius at which the bare trap reaches 18 `ħω_L`, far in the tail of
    /// the non-interacting ground state.
    pub fn bare_radius(&self) -> f64 {
        36f64.powf(1.0 / f64::from(self.q))
    }
}

/// How grids are sized for a given condensate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy {
    pub min_points: usize,
    pub max_points: usize,
    /// Half-extent as a multiple of the Thomas-Fermi radius.
    pub extent_factor: f64,
    /// Required points per healing length.
    pub points_per_healing_length: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self { min_points: 512, max_points: 1 << 14, extent_factor: 2.0, points_per_healing_length: 2.0 }
    }
}

impl GridPolicy {
    pub fn grid_for(&self, geom: &TrapGeometry, species: &Species, n_atoms: f64) -> Result<Grid> {
        let units = ReducedUnits::new(geom, species, n_atoms)?;
        let kind = match geom.d {
            1 => GridKind::Line,
            2 => GridKind::Plane,
            _ => GridKind::Radial,
        };
        let r_tf = units.tf_radius();
        let extent = (self.extent_factor * r_tf).max(units.bare_radius());
        let mu = units.potential(r_tf).max(0.5);
        let healing = 1.0 / (2.0 * mu).sqrt();
        let span = match kind {
            GridKind::Radial => extent,
            _ => 2.0 * extent,
        };
        let wanted = (span * self.points_per_healing_length / healing).ceil() as usize;
        let points = wanted.max(self.min_points).next_power_of_two().min(self.max_points);
        let grid = Grid::new(kind, points, extent, geom.r0)?;
        if grid.spacing > healing {
            log::warn!(
                "grid spacing {:.3e} r0 exceeds the healing length {:.3e} r0; increase max_points",
                grid.spacing,
                healing
            );
        }
        Ok(grid)
    }
}
