//! Real-time two-mode evolution and the spin-exchange loss budget.

use std::io::Write;

use num_complex::Complex64 as C64;

use super::grid::{Field, GridKind, Spectral};
use super::ground::{check_grid, energies};
use super::ReducedUnits;
use crate::error::{domain, Error, Result};
use crate::physical::{Species, Superposition, TrapGeometry, HBAR};
use crate::thomas_fermi::{delta_g, fringe_probabilities, phase_dynamics};

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionOptions {
    /// Fixed step count; `None` picks the smallest count meeting `max_phase`.
    pub steps: Option<usize>,
    /// Largest potential phase advance allowed in one step (rad).
    pub max_phase: f64,
    /// Number of evenly spaced records after `t = 0`.
    pub records: usize,
    pub loss: bool,
}

impl Default for EvolutionOptions {
    fn default() -> Self {
        Self { steps: None, max_phase: 0.1, records: 100, loss: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionSample {
    /// Time (s).
    pub t: f64,
    /// `⟨ψ₂|ψ₁⟩`.
    pub overlap: C64,
    pub p1: f64,
    pub p2: f64,
    pub norm1: f64,
    pub norm2: f64,
    /// Coupled energy functional per atom (J).
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionRecord {
    pub samples: Vec<EvolutionSample>,
    /// Step actually used (s).
    pub dt: f64,
    pub steps: usize,
    /// Mode fields at `t_final`.
    pub final_fields: [Field; 2],
}

impl EvolutionRecord {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub const CSV_HEADER: &'static str = "t_s,overlap_re,overlap_im,overlap_abs,p1,p2,norm1,norm2,energy_j";

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for s in &self.samples {
            writeln!(
                w,
                "{:.10e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                s.t,
                s.overlap.re,
                s.overlap.im,
                s.overlap.norm(),
                s.p1,
                s.p2,
                s.norm1,
                s.norm2,
                s.energy
            )?;
        }
        Ok(())
    }
}

/// Couplings of the two modes in reduced units.
struct Couplings {
    /// `κ (g_αβ/g₁₁) c_β²`.
    kappa: [[f64; 2]; 2],
    /// Loss rates `λ_αβ` multiplying `|ψ_β|²` in mode `α`.
    loss: [[f64; 2]; 2],
}

impl Couplings {
    fn new(units: &ReducedUnits, species: &Species, sup: Superposition, loss: bool) -> Self {
        let g11 = species.g11();
        let c2 = [sup.c1 * sup.c1, sup.c2 * sup.c2];
        let g = [[g11, species.g12()], [species.g12(), species.g22()]];
        let mut kappa = [[0.0; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                kappa[a][b] = units.kappa * g[a][b] / g11 * c2[b];
            }
        }
        let mut rates = [[0.0; 2]; 2];
        if loss {
            let l12 = units.kappa * HBAR * species.gamma12_loss / g11;
            let l22 = units.kappa * HBAR * species.gamma22_loss / g11;
            rates = [[0.0, l12 * c2[1]], [l12 * c2[0], l22 * c2[1]]];
        }
        Self { kappa, loss: rates }
    }
}

/// Propagates both modes from the same single-mode ground state under the
/// coupled GP equations with Strang splitting; the non-Hermitian loss sits
/// in the potential substep.
pub fn evolve_two_mode(
    initial: &Field,
    sup: Superposition,
    species: &Species,
    geom: &TrapGeometry,
    t_final: f64,
    opts: &EvolutionOptions,
) -> Result<EvolutionRecord> {
    let grid = &initial.grid;
    check_grid(grid, geom)?;
    if !(t_final > 0.0) || !t_final.is_finite() {
        return domain(format!("final time must be positive, got {t_final}"));
    }
    if (initial.norm_sqr() - 1.0).abs() > 1e-8 {
        return domain("initial field must be normalized");
    }
    let units = ReducedUnits::new(geom, species, initial.n_atoms)?;
    let cp = Couplings::new(&units, species, sup, opts.loss);
    let potential: Vec<f64> = grid.radii().iter().map(|&r| units.potential(r)).collect();
    let x = grid.coordinates();
    let radial = grid.kind == GridKind::Radial;
    let density = |v: C64, i: usize| if radial { v.norm_sqr() / (x[i] * x[i]) } else { v.norm_sqr() };

    let n0: Vec<f64> = initial.values.iter().enumerate().map(|(i, v)| density(*v, i)).collect();
    let max_phase = potential
        .iter()
        .zip(&n0)
        .map(|(v, n)| {
            let k = cp.kappa[0][0].max(cp.kappa[1][0]) + cp.kappa[0][1].max(cp.kappa[1][1]);
            v + k * n
        })
        .fold(0.0f64, f64::max);
    let tau = t_final / units.time;
    let dt_max = opts.max_phase / max_phase;
    let steps = match opts.steps {
        Some(s) => {
            if s == 0 || tau / s as f64 > dt_max {
                return Err(Error::Instability(format!(
                    "{s} steps give a potential phase of {:.3} rad per step, above {}",
                    tau / s.max(1) as f64 * max_phase,
                    opts.max_phase
                )));
            }
            s
        }
        None => (tau / dt_max).ceil() as usize,
    };
    let dt = tau / steps as f64;
    let h = 0.5 * dt;

    let mut spectral = Spectral::new(grid);
    let kinetic = spectral.kinetic_multiplier(C64::new(0.0, dt));
    let mut psi = [initial.values.clone(), initial.values.clone()];
    let c2 = [sup.c1 * sup.c1, sup.c2 * sup.c2];

    let sample = |psi: &[Vec<C64>; 2], spectral: &mut Spectral, step: usize| -> Result<EvolutionSample> {
        let overlap = grid.inner(&psi[1], &psi[0]);
        let norms = [grid.norm_sqr(&psi[0]), grid.norm_sqr(&psi[1])];
        if !opts.loss && norms.iter().any(|n| (n - 1.0).abs() > 1e-6) {
            return Err(Error::Instability(format!("norm drifted to {:?} without loss", norms)));
        }
        let (p1, p2) = fringe_probabilities(sup, overlap)
            .map_err(|_| Error::Instability(format!("overlap magnitude {} exceeds 1", overlap.norm())))?;
        let mut energy = 0.0;
        for a in 0..2 {
            let e = energies(grid, spectral, &potential, &psi[a]);
            energy += c2[a] * (e.kinetic + e.trap);
        }
        let cross: [[f64; 2]; 2] = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                grid.weight() * (0..grid.len()).map(|i| psi[a][i].norm_sqr() * density(psi[b][i], i)).sum::<f64>()
            })
        });
        for (a, row) in cross.iter().enumerate() {
            for (b, x) in row.iter().enumerate() {
                energy += 0.5 * c2[a] * cp.kappa[a][b] * x;
            }
        }
        Ok(EvolutionSample {
            t: step as f64 * dt * units.time,
            overlap,
            p1,
            p2,
            norm1: norms[0],
            norm2: norms[1],
            energy: energy * units.energy,
        })
    };

    let records = opts.records.max(1).min(steps);
    let mut samples = Vec::with_capacity(records + 1);
    samples.push(sample(&psi, &mut spectral, 0)?);
    let mut next_record = 1usize;

    let potential_step = |psi: &mut [Vec<C64>; 2]| {
        for i in 0..psi[0].len() {
            let n = [density(psi[0][i], i), density(psi[1][i], i)];
            let rate = |a: usize, n: &[f64; 2]| cp.loss[a][0] * n[0] + cp.loss[a][1] * n[1];
            let mid = [n[0] * (-0.5 * h * rate(0, &n)).exp(), n[1] * (-0.5 * h * rate(1, &n)).exp()];
            for (a, field) in psi.iter_mut().enumerate() {
                let phase = potential[i] + cp.kappa[a][0] * mid[0] + cp.kappa[a][1] * mid[1];
                field[i] *= C64::new(-0.5 * h * rate(a, &mid), -h * phase).exp();
            }
        }
    };

    for step in 1..=steps {
        potential_step(&mut psi);
        for p in psi.iter_mut() {
            spectral.apply_multiplier(p, &kinetic);
        }
        potential_step(&mut psi);
        if step * records >= next_record * steps {
            samples.push(sample(&psi, &mut spectral, step)?);
            next_record += 1;
        }
    }
    let [f1, f2] = psi;
    let wrap = |values| Field { grid: grid.clone(), values, n_atoms: initial.n_atoms };
    Ok(EvolutionRecord { samples, dt: dt * units.time, steps, final_fields: [wrap(f1), wrap(f2)] })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBudget {
    /// `Γ = (N−1) η_N (Γ₁₂ + Γ₂₂ c₂²)/2` (1/s).
    pub gamma: f64,
    /// `|Ω_N|` (rad/s).
    pub omega_n: f64,
    /// `Γ/|Ω_N| = ħ(Γ₁₂ + Γ₂₂ c₂²)/(2|Δg|)`.
    pub ratio: f64,
}

/// Spin-exchange decay rate compared with the phase-accumulation rate.
pub fn loss_budget(geom: &TrapGeometry, species: &Species, n_atoms: f64, sup: Superposition) -> Result<LossBudget> {
    if delta_g(species, sup) == 0.0 {
        return Err(Error::UndefinedSensitivity("no signal: Δg = 0, so no relative phase accumulates".into()));
    }
    let phase = phase_dynamics(geom, species, n_atoms, sup)?;
    let eta_n = phase.omega_n * HBAR / ((n_atoms - 1.0) * phase.delta_g);
    let loss = species.gamma12_loss + species.gamma22_loss * sup.c2 * sup.c2;
    let gamma = 0.5 * (n_atoms - 1.0) * eta_n * loss;
    let omega_n = phase.omega_n.abs();
    Ok(LossBudget { gamma, omega_n, ratio: gamma / omega_n })
}
