//! Spatial grids, fields and the spectral kinetic operator.
//!
//! Everything here is in reduced units: lengths in `r₀`, energies in `ħω_L`,
//! times in `1/ω_L`. Wave functions are normalized to one.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridKind {
    /// `d = 1`, periodic line `[−L, L)`.
    Line,
    /// `d = 2`, periodic square `[−L, L)²`.
    Plane,
    /// `d = 3` with an isotropic trap: `u = rψ` stored as an odd function on
    /// the cell-centred line `x_j = (j − M + ½)h`, `j = 0..2M`.
    Radial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub kind: GridKind,
    /// Points per axis; for [`GridKind::Radial`] the number of cells in `(0, L)`.
    pub points: usize,
    /// Half-extent `L` in units of `r₀`.
    pub extent: f64,
    /// Spacing in units of `r₀`.
    pub spacing: f64,
    /// `r₀` in metres.
    pub length_unit: f64,
}

impl Grid {
    pub fn new(kind: GridKind, points: usize, extent: f64, length_unit: f64) -> Result<Self> {
        if points < 64 {
            return domain(format!("grid needs at least 64 points per axis, got {points}"));
        }
        if !(extent > 0.0) || !(length_unit > 0.0) {
            return domain("grid extent and length unit must be positive");
        }
        let spacing = match kind {
            GridKind::Line | GridKind::Plane => 2.0 * extent / points as f64,
            GridKind::Radial => extent / points as f64,
        };
        Ok(Self { kind, points, extent, spacing, length_unit })
    }

    pub fn dimension(&self) -> u32 {
        match self.kind {
            GridKind::Line => 1,
            GridKind::Plane => 2,
            GridKind::Radial => 3,
        }
    }

    /// Length of the stored array.
    pub fn len(&self) -> usize {
        match self.kind {
            GridKind::Line => self.points,
            GridKind::Plane => self.points * self.points,
            GridKind::Radial => 2 * self.points,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Length of one FFT axis.
    fn axis_len(&self) -> usize {
        match self.kind {
            GridKind::Radial => 2 * self.points,
            _ => self.points,
        }
    }

    fn axis_coord(&self, j: usize) -> f64 {
        match self.kind {
            GridKind::Radial => (j as f64 - self.points as f64 + 0.5) * self.spacing,
            _ => -self.extent + j as f64 * self.spacing,
        }
    }

    /// Signed coordinate along the line (radial grids: the odd-extension coordinate).
    pub fn coordinates(&self) -> Vec<f64> {
        (0..self.axis_len()).map(|j| self.axis_coord(j)).collect()
    }

    /// Distance from the trap centre for every stored point.
    pub fn radii(&self) -> Vec<f64> {
        match self.kind {
            GridKind::Line | GridKind::Radial => self.coordinates().iter().map(|x| x.abs()).collect(),
            GridKind::Plane => {
                let c = self.coordinates();
                let n = self.points;
                (0..n * n).map(|i| c[i / n].hypot(c[i % n])).collect()
            }
        }
    }

    /// Integration weight per stored point for `∫ f d^d r` of a function of
    /// `ψ`; radial grids carry the `2π` that maps `∫_{−L}^{L} dx` onto
    /// `4π ∫₀^L r² dr` for `u = rψ`.
    pub fn weight(&self) -> f64 {
        match self.kind {
            GridKind::Line => self.spacing,
            GridKind::Plane => self.spacing * self.spacing,
            GridKind::Radial => 2.0 * std::f64::consts::PI * self.spacing,
        }
    }

    /// `|ψ|²` at every stored point given stored values.
    pub fn density(&self, values: &[C64]) -> Vec<f64> {
        match self.kind {
            GridKind::Radial => {
                let x = self.coordinates();
                values.iter().zip(&x).map(|(u, x)| u.norm_sqr() / (x * x)).collect()
            }
            _ => values.iter().map(|v| v.norm_sqr()).collect(),
        }
    }

    /// `∫|ψ|²`.
    pub fn norm_sqr(&self, values: &[C64]) -> f64 {
        self.weight() * values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// `∫ψ₂*ψ₁`.
    pub fn inner(&self, a: &[C64], b: &[C64]) -> C64 {
        self.weight() * a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>()
    }

    /// `∫ f |ψ|²` for a pointwise function `f` evaluated on the density.
    pub fn integrate_density<F: Fn(usize, f64) -> f64>(&self, values: &[C64], f: F) -> f64 {
        let dens = self.density(values);
        self.weight() * values.iter().enumerate().map(|(i, v)| v.norm_sqr() * f(i, dens[i])).sum::<f64>()
    }

    /// `η = ∫|ψ|⁴`, in units of `r₀^{−d}`.
    pub fn eta(&self, values: &[C64]) -> f64 {
        self.integrate_density(values, |_, n| n)
    }

    /// Squared wave numbers in FFT order for every stored point.
    fn k_squared(&self) -> Vec<f64> {
        let n = self.axis_len();
        let dk = 2.0 * std::f64::consts::PI / (n as f64 * self.spacing);
        let k1: Vec<f64> = (0..n)
            .map(|j| {
                let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                m * dk
            })
            .collect();
        match self.kind {
            GridKind::Plane => (0..n * n).map(|i| k1[i / n].powi(2) + k1[i % n].powi(2)).collect(),
            _ => k1.iter().map(|k| k * k).collect(),
        }
    }
}

/// FFT plans and `k²` for one grid.
pub struct Spectral {
    grid: Grid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k2: Vec<f64>,
    scratch: Vec<C64>,
    transpose: Vec<C64>,
}

impl Spectral {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.axis_len();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch =
            vec![C64::new(0.0, 0.0); forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len())];
        Self {
            grid: grid.clone(),
            forward,
            inverse,
            k2: grid.k_squared(),
            scratch,
            transpose: vec![C64::new(0.0, 0.0); if grid.kind == GridKind::Plane { n * n } else { 0 }],
        }
    }

    pub fn k_squared(&self) -> &[f64] {
        &self.k2
    }

    fn transform(&mut self, data: &mut [C64], inverse: bool) {
        let plan = if inverse { &self.inverse } else { &self.forward };
        plan.process_with_scratch(data, &mut self.scratch);
        if self.grid.kind == GridKind::Plane {
            let n = self.grid.points;
            transpose(data, &mut self.transpose, n);
            plan.process_with_scratch(&mut self.transpose, &mut self.scratch);
            transpose(&self.transpose, data, n);
        }
        if inverse {
            let s = 1.0 / data.len() as f64;
            data.iter_mut().for_each(|v| *v *= s);
        }
    }

    /// `ψ ← F⁻¹[m(k²) F[ψ]]` for a precomputed multiplier per Fourier mode.
    pub fn apply_multiplier(&mut self, data: &mut [C64], multiplier: &[C64]) {
        self.transform(data, false);
        for (v, m) in data.iter_mut().zip(multiplier) {
            *v *= m;
        }
        self.transform(data, true);
    }

    /// Multiplier `exp(−z k²/2)`: `z = dτ` for imaginary time, `z = i dt` for real time.
    pub fn kinetic_multiplier(&self, z: C64) -> Vec<C64> {
        self.k2.iter().map(|k2| (-z * 0.5 * k2).exp()).collect()
    }

    /// `⟨ψ| −½∇² |ψ⟩`.
    pub fn kinetic_energy(&mut self, values: &[C64]) -> f64 {
        let mut buf = values.to_vec();
        self.transform(&mut buf, false);
        let n = buf.len() as f64;
        // Parseval: Σ|ψ_j|² = (1/n) Σ|ψ̂_k|².
        let s: f64 = buf.iter().zip(&self.k2).map(|(v, k2)| 0.5 * k2 * v.norm_sqr()).sum();
        self.grid.weight() * s / n
    }
}

fn transpose(src: &[C64], dst: &mut [C64], n: usize) {
    for i in 0..n {
        for j in 0..n {
            dst[j * n + i] = src[i * n + j];
        }
    }
}

/// A wave function on a grid together with the atom number it describes.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    /// Stored values in reduced units (`u = rψ` on radial grids).
    pub values: Vec<C64>,
    pub n_atoms: f64,
}

impl Field {
    pub fn norm_sqr(&self) -> f64 {
        self.grid.norm_sqr(&self.values)
    }

    pub fn normalize(&mut self) {
        let s = self.norm_sqr().sqrt();
        if s > 0.0 {
            self.values.iter_mut().for_each(|v| *v /= s);
        }
    }

    /// `|ψ|²` in m^{−d}.
    pub fn density_si(&self) -> Vec<f64> {
        let scale = self.grid.length_unit.powi(self.grid.dimension() as i32);
        self.grid.density(&self.values).into_iter().map(|n| n / scale).collect()
    }
}
