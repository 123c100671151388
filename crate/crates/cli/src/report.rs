//! Report tree, flat tables and file emission.

use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::config::{Command, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One pass/fail (or not-applicable) flag in the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub scenario: String,
    pub module: String,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub scenario: String,
    pub bound: String,
    pub map: String,
    pub ring: String,
    pub radius: f64,
    pub angle: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiRow {
    pub scenario: String,
    pub phi: String,
    pub p: f64,
    pub condition: String,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionRow {
    pub scenario: String,
    pub map: String,
    pub x: f64,
    pub y: f64,
    pub analytic: Option<f64>,
    pub finite_difference: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueRow {
    pub scenario: String,
    pub map: String,
    pub ring: String,
    pub quantity: String,
    pub value: f64,
    pub reference: Option<f64>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityRow {
    pub scenario: String,
    pub member: String,
    pub eps: f64,
    pub delta: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipRow {
    pub scenario: String,
    pub map: String,
    pub weighted_integral: f64,
    pub unweighted_integral: f64,
    pub omitted_diameter: Option<f64>,
    pub budget: f64,
    pub gap: f64,
    pub member: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tables {
    pub bounds: Vec<BoundRow>,
    pub phi: Vec<PhiRow>,
    pub distortion: Vec<DistortionRow>,
    pub modulus: Vec<ValueRow>,
    pub means: Vec<ValueRow>,
    pub continuity: Vec<ContinuityRow>,
    pub membership: Vec<MembershipRow>,
}

impl Tables {
    pub fn extend(&mut self, other: Tables) {
        self.bounds.extend(other.bounds);
        self.phi.extend(other.phi);
        self.distortion.extend(other.distortion);
        self.modulus.extend(other.modulus);
        self.means.extend(other.means);
        self.continuity.extend(other.continuity);
        self.membership.extend(other.membership);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub command: Command,
    pub seed: u64,
    pub scenario: Scenario,
    pub elapsed_ms: f64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub details: serde_json::Value,
    #[serde(skip)]
    pub tables: Tables,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub tool: String,
    pub version: String,
    pub os: String,
    pub arch: String,
    pub workers: usize,
    pub available_parallelism: usize,
}

impl Environment {
    pub fn capture(workers: usize) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            workers,
            available_parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub module: String,
    pub checks: usize,
    pub failures: usize,
    pub not_applicable: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub environment: Environment,
    pub elapsed_ms: f64,
    pub scenarios: Vec<ScenarioReport>,
    pub summary: Vec<SummaryRow>,
    pub pass: bool,
}

impl Report {
    pub fn new(seed: u64, environment: Environment, scenarios: Vec<ScenarioReport>, elapsed_ms: f64) -> Self {
        let checks: Vec<&Check> = scenarios.iter().flat_map(|s| &s.checks).collect();
        let mut modules: Vec<&str> = checks.iter().map(|c| c.module.as_str()).collect();
        modules.sort_unstable();
        modules.dedup();
        let summary: Vec<SummaryRow> = modules
            .into_iter()
            .map(|m| {
                let of: Vec<&&Check> = checks.iter().filter(|c| c.module == m).collect();
                let failures = of.iter().filter(|c| c.status == Status::Fail).count();
                SummaryRow {
                    module: m.into(),
                    checks: of.len(),
                    failures,
                    not_applicable: of.iter().filter(|c| c.status == Status::NotApplicable).count(),
                    pass: failures == 0,
                }
            })
            .collect();
        let pass = scenarios.iter().all(|s| s.pass);
        Self {
            seed,
            environment,
            elapsed_ms,
            scenarios,
            summary,
            pass,
        }
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.scenarios.iter().flat_map(|s| &s.checks)
    }

    pub fn tables(&self) -> Tables {
        let mut t = Tables::default();
        for s in &self.scenarios {
            t.extend(s.tables.clone());
        }
        t
    }

    /// One line per module.
    pub fn summary_lines(&self) -> Vec<String> {
        self.summary
            .iter()
            .map(|s| {
                format!(
                    "{:<15} {} ({} checks, {} failed, {} not applicable)",
                    s.module,
                    if s.pass { "PASS" } else { "FAIL" },
                    s.checks,
                    s.failures,
                    s.not_applicable
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

fn write_csv<T: Serialize>(dir: &Path, name: &str, rows: &[T], always: bool) -> anyhow::Result<Option<String>> {
    if rows.is_empty() && !always {
        return Ok(None);
    }
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("cannot write {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().with_context(|| format!("cannot write {}", path.display()))?;
    Ok(Some(name.to_string()))
}

/// Writes `report.json` and/or the flat tables into `dir`; returns the
/// file names written.
pub fn emit(report: &Report, dir: &Path, format: Format) -> anyhow::Result<Vec<String>> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut written = Vec::new();
    if matches!(format, Format::Json | Format::Both) {
        let path = dir.join("report.json");
        let text = serde_json::to_string_pretty(report)?;
        std::fs::write(&path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
        written.push("report.json".to_string());
    }
    if matches!(format, Format::Csv | Format::Both) {
        let t = report.tables();
        let checks: Vec<Check> = report.checks().cloned().collect();
        let files = [
            write_csv(dir, "checks.csv", &checks, true)?,
            write_csv(dir, "summary.csv", &report.summary, true)?,
            write_csv(dir, "bounds.csv", &t.bounds, false)?,
            write_csv(dir, "phi.csv", &t.phi, false)?,
            write_csv(dir, "distortion.csv", &t.distortion, false)?,
            write_csv(dir, "modulus.csv", &t.modulus, false)?,
            write_csv(dir, "means.csv", &t.means, false)?,
            write_csv(dir, "continuity.csv", &t.continuity, false)?,
            write_csv(dir, "membership.csv", &t.membership, false)?,
        ];
        written.extend(files.into_iter().flatten());
    }
    Ok(written)
}
