//! Scenario runner and report writer for the qclab numerical toolkit.

pub mod config;
pub mod exec;
pub mod report;
pub mod select;

use std::time::Instant;

use anyhow::Context as _;
use rayon::prelude::*;

pub use config::{Command, Config, Scenario};
pub use exec::Context;
pub use report::{emit, Format, Report};

/// Runs every scenario of `cfg` on a pool of `workers` threads. Results keep
/// the order of the scenario list.
pub fn run(cfg: &Config, workers: usize) -> anyhow::Result<Report> {
    let start = Instant::now();
    let ctx = Context {
        seed: cfg.seed,
        profiles: cfg.profiles.clone(),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .context("building worker pool")?;
    let reports = pool.install(|| {
        cfg.scenarios
            .par_iter()
            .enumerate()
            .map(|(i, s)| exec::run_scenario(s, i, &ctx))
            .collect::<anyhow::Result<Vec<_>>>()
    })?;
    Ok(Report::new(
        cfg.seed,
        report::Environment::capture(workers.max(1)),
        reports,
        start.elapsed().as_secs_f64() * 1e3,
    ))
}
