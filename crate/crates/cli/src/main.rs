use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qclab::{Command, Config, Format, Scenario};

#[derive(Parser)]
#[command(name = "qclab", version, about = "Numerical checks for finite-distortion mappings")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distortion coefficients: analytic versus difference quotients.
    Distortion(Opts),
    /// Closed-form and discrete moduli, image-modulus chains, extremal weights.
    Modulus(Opts),
    /// Circle means, I integrals, mean oscillation, divergence at the centre.
    Means(Opts),
    /// Divergence conditions for convex Φ and their agreement.
    Phi(Opts),
    /// Distortion bounds and Φ-mean inequalities.
    Bounds(Opts),
    /// Empirical equicontinuity probe at the origin.
    Equicontinuity(Opts),
    /// Counterexample families when the sufficiency integral converges.
    Necessity(Opts),
    /// Every module with quick defaults.
    FullBattery(Opts),
    /// Run all scenarios of a config file.
    Run(Opts),
}

#[derive(Args, Clone)]
struct Opts {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value = "qclab-out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    format: Format,
    /// Map selector; repeat or comma-separate.
    #[arg(long = "map", value_delimiter = ',')]
    maps: Vec<String>,
    /// Ring `r1:r2` about the origin; repeat or comma-separate.
    #[arg(long = "ring", value_delimiter = ',')]
    rings: Vec<String>,
    #[arg(long = "phi", value_delimiter = ',')]
    phis: Vec<String>,
    #[arg(long = "p", value_delimiter = ',')]
    ps: Vec<f64>,
    /// Condition names or `all`.
    #[arg(long, value_delimiter = ',')]
    conditions: Vec<String>,
    #[arg(long = "eps", value_delimiter = ',')]
    eps: Vec<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    expect_uniform: Option<bool>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

impl Opts {
    fn apply(&self, s: &mut Scenario) {
        fn set<T: Clone>(dst: &mut Vec<T>, src: &[T]) {
            if !src.is_empty() {
                *dst = src.to_vec();
            }
        }
        set(&mut s.maps, &self.maps);
        set(&mut s.rings, &self.rings);
        set(&mut s.phis, &self.phis);
        set(&mut s.ps, &self.ps);
        set(&mut s.conditions, &self.conditions);
        set(&mut s.eps, &self.eps);
        s.delta = self.delta.or(s.delta);
        s.budget = self.budget.or(s.budget);
        s.grid = self.grid.or(s.grid);
        s.expect_uniform = self.expect_uniform.or(s.expect_uniform);
    }
}

fn resolve(cmd: Option<Command>, opts: &Opts) -> anyhow::Result<Config> {
    let mut cfg = match &opts.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = opts.seed {
        cfg.seed = seed;
    }
    if let Some(w) = opts.workers {
        cfg.workers = Some(w);
    }
    match cmd {
        None => {
            if opts.config.is_none() {
                anyhow::bail!("`run` needs --config");
            }
            for s in &mut cfg.scenarios {
                opts.apply(s);
            }
        }
        Some(c) if opts.config.is_some() => {
            cfg.scenarios.retain(|s| s.command == c);
            if cfg.scenarios.is_empty() {
                cfg.scenarios.push(Scenario::new(c));
            }
            for s in &mut cfg.scenarios {
                opts.apply(s);
            }
        }
        Some(c) => {
            let mut s = Scenario::new(c);
            opts.apply(&mut s);
            cfg.scenarios.push(s);
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, opts) = match cli.command {
        Cmd::Distortion(o) => (Some(Command::Distortion), o),
        Cmd::Modulus(o) => (Some(Command::Modulus), o),
        Cmd::Means(o) => (Some(Command::Means), o),
        Cmd::Phi(o) => (Some(Command::Phi), o),
        Cmd::Bounds(o) => (Some(Command::Bounds), o),
        Cmd::Equicontinuity(o) => (Some(Command::Equicontinuity), o),
        Cmd::Necessity(o) => (Some(Command::Necessity), o),
        Cmd::FullBattery(o) => (Some(Command::FullBattery), o),
        Cmd::Run(o) => (None, o),
    };
    match execute(cmd, &opts) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cmd: Option<Command>, opts: &Opts) -> anyhow::Result<bool> {
    let cfg = resolve(cmd, opts)?;
    if opts.dump_config {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        return Ok(true);
    }
    let workers = cfg
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let report = qclab::run(&cfg, workers)?;
    let files = qclab::emit(&report, &opts.out, opts.format)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    for c in report.checks().filter(|c| c.status == qclab::report::Status::Fail) {
        println!("FAIL {} {}: {}", c.scenario, c.name, c.detail);
    }
    println!(
        "{} scenario(s), {} written to {}: {}",
        report.scenarios.len(),
        files.join(", "),
        opts.out.display(),
        if report.pass { "PASS" } else { "FAIL" }
    );
    Ok(report.pass)
}
