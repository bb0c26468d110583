//! Species and trap records as written in configuration files.
//!
//! Files are TOML with a `[species]` and a `[trap]` table:
//!
//! ```toml
//! [species]
//! mass_u = 86.9091805
//! a11_nm = 5.31
//! a22_nm = 5.0007
//! a12_nm = 5.1553
//! loss12_cm3_per_s = 0.780e-13
//! loss22_cm3_per_s = 1.194e-13
//!
//! [trap]
//! d = 1
//! q = 2            # or "hard_wall"
//! rho0_um = 1.0
//! r0_um = 100.0
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physical::{trap_from_lengths, Hardness, Species, TrapGeometry, ATOMIC_MASS_UNIT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    pub mass_u: f64,
    pub a11_nm: f64,
    pub a22_nm: f64,
    pub a12_nm: f64,
    #[serde(default)]
    pub loss12_cm3_per_s: f64,
    #[serde(default)]
    pub loss22_cm3_per_s: f64,
}

impl SpeciesConfig {
    pub fn to_species(&self) -> Result<Species> {
        Species::new(
            self.mass_u * ATOMIC_MASS_UNIT,
            self.a11_nm * 1e-9,
            self.a22_nm * 1e-9,
            self.a12_nm * 1e-9,
            self.loss12_cm3_per_s * 1e-6,
            self.loss22_cm3_per_s * 1e-6,
        )
        .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_species(s: &Species) -> Self {
        Self {
            mass_u: s.mass / ATOMIC_MASS_UNIT,
            a11_nm: s.a11 * 1e9,
            a22_nm: s.a22 * 1e9,
            a12_nm: s.a12 * 1e9,
            loss12_cm3_per_s: s.gamma12_loss * 1e6,
            loss22_cm3_per_s: s.gamma22_loss * 1e6,
        }
    }
}

/// `q` as written in a file: an integer exponent or `"hard_wall"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HardnessSpec {
    Power(u32),
    Named(String),
}

impl HardnessSpec {
    pub fn to_hardness(&self) -> Result<Hardness> {
        match self {
            HardnessSpec::Power(q) if *q >= 1 => Ok(Hardness::Power(*q)),
            HardnessSpec::Power(q) => Err(Error::Config(format!("q must be at least 1, got {q}"))),
            HardnessSpec::Named(s) if s == "hard_wall" || s == "inf" => Ok(Hardness::HardWall),
            HardnessSpec::Named(s) => {
                Err(Error::Config(format!("unknown hardness {s:?}; use an integer or \"hard_wall\"")))
            }
        }
    }

    pub fn from_hardness(h: Hardness) -> Self {
        match h {
            Hardness::Power(q) => HardnessSpec::Power(q),
            Hardness::HardWall => HardnessSpec::Named("hard_wall".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapConfig {
    pub d: u32,
    pub q: HardnessSpec,
    pub rho0_um: f64,
    pub r0_um: f64,
}

impl TrapConfig {
    pub fn to_geometry(&self, mass: f64) -> Result<TrapGeometry> {
        trap_from_lengths(self.d, self.q.to_hardness()?, self.rho0_um * 1e-6, self.r0_um * 1e-6, mass)
            .map_err(|e| Error::Config(e.to_string()))
    }
}

impl Default for TrapConfig {
    /// 1D harmonic trap with `ρ₀ = 1 μm`, `r₀ = 100 μm`.
    fn default() -> Self {
        Self { d: 1, q: HardnessSpec::Power(2), rho0_um: 1.0, r0_um: 100.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Rb87,
    Typical,
}

impl Preset {
    pub fn species(self) -> Species {
        match self {
            Preset::Rb87 => Species::rb87(),
            Preset::Typical => Species::typical(),
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "rb87" => Ok(Preset::Rb87),
            "typical" => Ok(Preset::Typical),
            other => Err(Error::Config(format!("unknown preset {other:?}; expected rb87 or typical"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConfig {
    pub species: SpeciesConfig,
    #[serde(default)]
    pub trap: TrapConfig,
}

impl PhysicalConfig {
    pub fn from_preset(p: Preset) -> Self {
        Self { species: SpeciesConfig::from_species(&p.species()), trap: TrapConfig::default() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn resolve(&self) -> Result<(Species, TrapGeometry)> {
        let species = self.species.to_species()?;
        let trap = self.trap.to_geometry(species.mass)?;
        Ok((species, trap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_documented_keys() {
        let text = r#"
            [species]
            mass_u = 86.909
            a11_nm = 5.31
            a22_nm = 5.0
            a12_nm = 5.15
            loss12_cm3_per_s = 0.780e-13
            loss22_cm3_per_s = 1.194e-13

            [trap]
            d = 2
            q = "hard_wall"
            rho0_um = 1.0
            r0_um = 50.0
        "#;
        let cfg = PhysicalConfig::parse(text).unwrap();
        let (s, t) = cfg.resolve().unwrap();
        assert!((s.a11 - 5.31e-9).abs() < 1e-20);
        assert!((s.gamma12_loss - 0.780e-19).abs() < 1e-30);
        assert_eq!(t.hardness, Hardness::HardWall);
        assert!((t.r0 - 50e-6).abs() < 1e-18);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(PhysicalConfig::parse("[species]\nmass_u = 1.0\n").is_err());
        let bad = "[species]\nmass_u=1\na11_nm=1\na22_nm=1\na12_nm=1\nbogus=3\n";
        assert!(PhysicalConfig::parse(bad).is_err());
        let neg = "[species]\nmass_u=1\na11_nm=-1\na22_nm=1\na12_nm=1\n";
        assert!(matches!(PhysicalConfig::parse(neg).unwrap().resolve(), Err(Error::Config(_))));
        let q0 = "[species]\nmass_u=1\na11_nm=1\na22_nm=1\na12_nm=1\n[trap]\nd=1\nq=\"soft\"\nrho0_um=1\nr0_um=10\n";
        assert!(PhysicalConfig::parse(q0).unwrap().resolve().is_err());
    }

    #[test]
    fn round_trip_is_idempotent() {
        let cfg = PhysicalConfig::from_preset(Preset::Rb87);
        let once = cfg.to_toml().unwrap();
        let twice = PhysicalConfig::parse(&once).unwrap().to_toml().unwrap();
        assert_eq!(once, twice);
        let (s, _) = PhysicalConfig::parse(&once).unwrap().resolve().unwrap();
        assert!((s.a22 / Species::rb87().a22 - 1.0).abs() < 1e-14);
    }
}
