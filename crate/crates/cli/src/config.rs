//! Scenario files: a TOML tree with global settings, optional tabulated
//! radial profiles and a list of `[[scenario]]` tables.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Distortion,
    Modulus,
    Means,
    Phi,
    Bounds,
    Equicontinuity,
    Necessity,
    FullBattery,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Distortion,
        Command::Modulus,
        Command::Means,
        Command::Phi,
        Command::Bounds,
        Command::Equicontinuity,
        Command::Necessity,
        Command::FullBattery,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Distortion => "distortion",
            Command::Modulus => "modulus",
            Command::Means => "means",
            Command::Phi => "phi",
            Command::Bounds => "bounds",
            Command::Equicontinuity => "equicontinuity",
            Command::Necessity => "necessity",
            Command::FullBattery => "full-battery",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .with_context(|| format!("unknown command '{s}'"))
    }
}

/// A radial map given by tabulated distortion values `k(r)` on `(core, 1)`,
/// interpolated linearly in `log r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub name: String,
    pub radii: Vec<f64>,
    pub distortion: Vec<f64>,
    #[serde(default = "default_core")]
    pub core: f64,
}

fn default_core() -> f64 {
    1e-3
}

/// One unit of work. Empty lists fall back to per-command defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub maps: Vec<String>,
    #[serde(default)]
    pub rings: Vec<String>,
    #[serde(default)]
    pub phis: Vec<String>,
    #[serde(default)]
    pub ps: Vec<f64>,
    #[serde(default)]
    pub conditions: Vec<String>,
    /// Scale schedule for ring means and disk oscillations.
    #[serde(default)]
    pub eps: Vec<f64>,
    /// Target `ε` values for continuity probes.
    #[serde(default)]
    pub targets: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    /// Side of the square polar grid for discrete moduli; 0 disables them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_radii: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_angles: Option<usize>,
    /// Relative tolerance for discrete-versus-closed-form comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_uniform: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Scenario {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            name: None,
            maps: Vec::new(),
            rings: Vec::new(),
            phis: Vec::new(),
            ps: Vec::new(),
            conditions: Vec::new(),
            eps: Vec::new(),
            targets: Vec::new(),
            delta: None,
            budget: None,
            grid: None,
            sample_radii: None,
            sample_angles: None,
            tolerance: None,
            expect_uniform: None,
            seed: None,
        }
    }

    pub fn label(&self, index: usize) -> String {
        self.name.clone().unwrap_or_else(|| format!("{}-{index}", self.command))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, rename = "profile")]
    pub profiles: Vec<ProfileSpec>,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<Scenario>,
}

impl Config {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| anyhow::anyhow!("config parse error: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    fn validate(&self) -> anyhow::Result<()> {
        for p in &self.profiles {
            if p.radii.len() != p.distortion.len() || p.radii.len() < 2 {
                bail!("profile '{}': radii and distortion need equal length ≥ 2", p.name);
            }
            if p.radii.windows(2).any(|w| w[1] <= w[0]) || p.radii[0] <= 0.0 {
                bail!("profile '{}': radii must be positive and strictly increasing", p.name);
            }
            if p.distortion.iter().any(|&k| k.is_nan() || k < 1.0) {
                bail!("profile '{}': distortion values must be ≥ 1", p.name);
            }
            if !(p.core > 0.0 && p.core < 1.0) {
                bail!("profile '{}': core must lie in (0, 1)", p.name);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scenarios_and_profiles() {
        let cfg = Config::parse(
            r#"
seed = 3
[[profile]]
name = "tab"
radii = [0.01, 0.1, 1.0]
distortion = [3.0, 2.0, 1.0]

[[scenario]]
command = "bounds"
maps = ["radial_stretch:3"]
rings = ["0.1:0.5"]
"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.profiles[0].core, 1e-3);
        assert_eq!(cfg.scenarios[0].command, Command::Bounds);
    }

    #[test]
    fn unknown_field_is_reported_with_its_name() {
        let err = Config::parse("[[scenario]]\ncommand = \"phi\"\nphi = [\"exp\"]\n").unwrap_err();
        let msg = format!("{err:#}");
        assert!(msg.contains("phi") && msg.contains("line"), "{msg}");
    }

    #[test]
    fn empty_file_is_an_empty_config() {
        assert!(Config::parse("").unwrap().scenarios.is_empty());
    }
}
