//! Run configuration: a TOML file with optional `preset` and `seed` keys and
//! the tables `[species]`, `[trap]`, `[grid]`, `[sweep]` and `[protocol]`.
//!
//! ```toml
//! preset = "rb87"          # or an inline [species] table
//! seed = 7
//!
//! [trap]
//! d = 1
//! q = 2                    # or "hard_wall"
//! rho0_um = 1.0
//! r0_um = 100.0
//!
//! [grid]
//! min_points = 512
//! max_points = 16384
//! extent_factor = 2.0
//! points_per_healing_length = 2.0
//! tolerance = 1e-10
//! max_steps = 4000000
//!
//! [sweep]
//! n_values = [8, 16, 32, 64, 128, 256, 512, 1024]
//! t_values = [1.0]
//! q_values = [1, 2, 3, 4, 6, 10, 20, inf]
//! n_over_nl = [10, 30, 100, 300, 1000]
//! evolve_n_over_nl = 1000
//! omega_t_max = 0.5
//! records = 50
//! counting_n = [100, 1000, 10000]
//! sigma_over_sqrt_n = [0, 0.1, 0.5, 1]
//! trials = 100000
//!
//! [protocol]
//! kinds = ["ramsey", "cat", "enhanced_NJz", "product_Jz2"]
//! short_time = 1e-3
//! trace_n = 100
//! trace_gamma = 1e-3
//! trace_t = [0.01, 0.1, 1, 10]
//! ```
//!
//! Every key except the species is optional and falls back to the values
//! shown. Unknown keys are rejected.

use std::path::Path;

use bec_metrology::config::{Preset, SpeciesConfig, TrapConfig};
use bec_metrology::gp::{GridPolicy, GroundStateOptions};
use bec_metrology::physical::{Hardness, Species, TrapGeometry};
use bec_metrology::spin::ProtocolKind;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub species: Option<SpeciesConfig>,
    #[serde(default)]
    pub trap: TrapConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub protocol: ProtocolConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub min_points: usize,
    pub max_points: usize,
    pub extent_factor: f64,
    pub points_per_healing_length: f64,
    pub tolerance: f64,
    pub max_steps: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let p = GridPolicy::default();
        let o = GroundStateOptions::default();
        Self {
            min_points: p.min_points,
            max_points: p.max_points,
            extent_factor: p.extent_factor,
            points_per_healing_length: p.points_per_healing_length,
            tolerance: o.tolerance,
            max_steps: o.max_steps,
        }
    }
}

impl GridConfig {
    pub fn policy(&self) -> GridPolicy {
        GridPolicy {
            min_points: self.min_points,
            max_points: self.max_points,
            extent_factor: self.extent_factor,
            points_per_healing_length: self.points_per_healing_length,
        }
    }

    pub fn options(&self) -> GroundStateOptions {
        GroundStateOptions { tolerance: self.tolerance, max_steps: self.max_steps, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub t_values: Vec<f64>,
    pub q_values: Vec<f64>,
    pub n_over_nl: Vec<f64>,
    pub evolve_n_over_nl: f64,
    pub omega_t_max: f64,
    pub records: usize,
    pub counting_n: Vec<u64>,
    pub sigma_over_sqrt_n: Vec<f64>,
    pub trials: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_values: (3..=10).map(|k| 1usize << k).collect(),
            t_values: vec![1.0],
            q_values: vec![1.0, 2.0, 3.0, 4.0, 6.0, 10.0, 20.0, f64::INFINITY],
            n_over_nl: vec![10.0, 30.0, 100.0, 300.0, 1000.0],
            evolve_n_over_nl: 1000.0,
            omega_t_max: 0.5,
            records: 50,
            counting_n: vec![100, 1000, 10_000],
            sigma_over_sqrt_n: vec![0.0, 0.1, 0.5, 1.0],
            trials: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolConfig {
    pub kinds: Vec<String>,
    pub short_time: f64,
    pub trace_n: usize,
    pub trace_gamma: f64,
    pub trace_t: Vec<f64>,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        Self {
            kinds: ProtocolKind::ALL.iter().map(|k| k.name().to_string()).collect(),
            short_time: 1e-3,
            trace_n: 100,
            trace_gamma: 1e-3,
            trace_t: vec![0.01, 0.1, 1.0, 10.0],
        }
    }
}

impl ProtocolConfig {
    pub fn kinds(&self) -> Result<Vec<ProtocolKind>, CliError> {
        self.kinds
            .iter()
            .map(|name| {
                ProtocolKind::ALL
                    .into_iter()
                    .find(|k| k.name() == name)
                    .ok_or_else(|| CliError::Config(format!("unknown protocol {name:?}")))
            })
            .collect()
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(config_err)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(config_err)
    }

    /// Applies command-line overrides, inlines the species and validates
    /// every field, so the result reproduces the run on its own.
    pub fn resolve(mut self, preset: Option<Preset>, seed: Option<u64>) -> Result<Self, CliError> {
        if let Some(p) = preset {
            self.preset = Some(p);
            self.species = None;
        }
        if let Some(s) = seed {
            self.seed = s;
        }
        let species = match (self.preset.take(), self.species) {
            (Some(_), Some(_)) => return Err(CliError::Config("give either preset or [species], not both".into())),
            (Some(p), None) => SpeciesConfig::from_species(&p.species()),
            (None, Some(s)) => s,
            (None, None) => SpeciesConfig::from_species(&Preset::Rb87.species()),
        };
        self.species = Some(species);
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<(), CliError> {
        self.physical()?;
        self.protocol.kinds()?;
        let s = &self.sweep;
        let nonempty = [
            ("sweep.n_values", s.n_values.is_empty()),
            ("sweep.t_values", s.t_values.is_empty()),
            ("sweep.q_values", s.q_values.is_empty()),
            ("sweep.n_over_nl", s.n_over_nl.is_empty()),
            ("sweep.counting_n", s.counting_n.is_empty()),
            ("sweep.sigma_over_sqrt_n", s.sigma_over_sqrt_n.is_empty()),
            ("protocol.kinds", self.protocol.kinds.is_empty()),
            ("protocol.trace_t", self.protocol.trace_t.is_empty()),
        ];
        if let Some((name, _)) = nonempty.iter().find(|(_, empty)| *empty) {
            return Err(CliError::Config(format!("{name} must not be empty")));
        }
        if s.n_values.contains(&0) || s.counting_n.contains(&0) {
            return Err(CliError::Config("atom numbers must be positive".into()));
        }
        if s.t_values.iter().chain(&self.protocol.trace_t).any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(CliError::Config("times must be positive and finite".into()));
        }
        for &q in &s.q_values {
            hardness_from(q)?;
        }
        if s.n_over_nl.iter().chain([&s.evolve_n_over_nl]).any(|r| !(*r >= 1.0)) {
            return Err(CliError::Config("N/N_L ratios must be at least 1".into()));
        }
        if s.sigma_over_sqrt_n.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(CliError::Config("sigma_over_sqrt_n entries must be finite and non-negative".into()));
        }
        if s.trials < 2 || s.records == 0 || !(s.omega_t_max > 0.0) {
            return Err(CliError::Config("need trials ≥ 2, records ≥ 1 and omega_t_max > 0".into()));
        }
        if self.protocol.trace_n < 2 {
            return Err(CliError::Config("protocol.trace_n must be at least 2".into()));
        }
        Ok(())
    }

    pub fn physical(&self) -> Result<(Species, TrapGeometry), CliError> {
        let sc = self.species.as_ref().ok_or_else(|| CliError::Config("species not resolved".into()))?;
        let species = sc.to_species().map_err(config_err)?;
        let geom = self.trap.to_geometry(species.mass).map_err(config_err)?;
        Ok((species, geom))
    }
}

/// `q` from a sweep list: a positive integer or `inf` for a hard wall.
pub fn hardness_from(q: f64) -> Result<Hardness, CliError> {
    if q.is_infinite() && q > 0.0 {
        Ok(Hardness::HardWall)
    } else if q >= 1.0 && q.fract() == 0.0 && q <= f64::from(u32::MAX) {
        Ok(Hardness::Power(q as u32))
    } else {
        Err(CliError::Config(format!("hardness must be a positive integer or inf, got {q}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_resolves_to_defaults() {
        let cfg = RunConfig::parse("").unwrap().resolve(None, None).unwrap();
        assert_eq!(cfg.species, Some(SpeciesConfig::from_species(&Species::rb87())));
        assert_eq!(cfg.sweep, SweepConfig::default());
        assert_eq!(cfg.protocol.kinds().unwrap(), ProtocolKind::ALL.to_vec());
    }

    #[test]
    fn round_trip_is_idempotent() {
        let cfg = RunConfig::parse(
            "preset = \"typical\"\nseed = 9\n[trap]\nd = 2\nq = \"hard_wall\"\nrho0_um = 1\nr0_um = 50\n",
        )
        .unwrap()
        .resolve(None, None)
        .unwrap();
        let once = cfg.to_toml().unwrap();
        let back = RunConfig::parse(&once).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_toml().unwrap(), once);
        assert!(once.contains("inf"));
    }

    #[test]
    fn overrides_win() {
        let cfg =
            RunConfig::parse("preset = \"typical\"\nseed = 1\n").unwrap().resolve(Some(Preset::Rb87), Some(5)).unwrap();
        assert_eq!(cfg.seed, 5);
        assert_eq!(cfg.species, Some(SpeciesConfig::from_species(&Species::rb87())));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let both = "preset = \"rb87\"\n[species]\nmass_u = 87\na11_nm = 5\na22_nm = 5\na12_nm = 5\n";
        for text in [
            "bogus = 1\n",
            "preset = \"na23\"\n",
            both,
            "[sweep]\nn_values = []\n",
            "[sweep]\nq_values = [2.5]\n",
            "[sweep]\nt_values = [-1.0]\n",
            "[protocol]\nkinds = [\"squeezed\"]\n",
            "[trap]\nd = 4\nq = 2\nrho0_um = 1\nr0_um = 100\n",
        ] {
            let res = RunConfig::parse(text).and_then(|c| c.resolve(None, None));
            assert!(matches!(res, Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn hardness_parsing() {
        assert_eq!(hardness_from(2.0).unwrap(), Hardness::HARMONIC);
        assert_eq!(hardness_from(f64::INFINITY).unwrap(), Hardness::HardWall);
        assert!(hardness_from(0.0).is_err());
        assert!(hardness_from(1.5).is_err());
    }
}
