//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::f64::consts::{E, PI};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use qclab_core::geometry::{Domain, PolarGrid, RadialSpacing, Ring};
use qclab_core::mappings::{distortion, radial_stretch, shrinking_stretch_family, wirtinger, DEFAULT_FD_STEP};
use qclab_core::modulus::{
    discrete_modulus, extremal_density_lower, extremal_weight_ring, image_annulus_modulus, lower_rhs, ring_rhs,
    CurveFamilySpec, CurveKind, DiscreteConfig,
};
use qclab_core::phi::{classify_condition, equivalence_battery, Condition, CutoffSchedule, PhiFunction};
use qclab_core::verification::{
    battery_maps, battery_rings, counterexample_family, default_probe_targets, disk_hypothesis_constant,
    disk_power_check, equicontinuity_probe, mean_distortion_check, phi_mean_inequality, power_bound_check,
    ProbeConfig, SampleDesign, DEFAULT_GAP,
};
use qclab_core::{Error, GrowthClassifier, Verdict};

const ANALYTIC_TOL: f64 = 1e-6;
const FD_TOL: f64 = 1e-3;
const DISTORTION_BUDGET_S: f64 = 1.0;
const MODULUS_FINE_TOL: f64 = 0.02;
const MODULUS_COARSE_TOL: f64 = 0.05;
const DUALITY_TOL: f64 = 0.05;
const MODULUS_BUDGET_S: f64 = 60.0;
const NORMALISATION_TOL: f64 = 1e-8;
const EXTREMAL_IDENTITY_TOL: f64 = 5e-3;
const DENSITY_CIRCLE_TOL: f64 = 1e-6;
const CLOSED_FORM_TOL: f64 = 1e-6;
const WORKED_CASE_TOL: f64 = 1e-3;
const GAP_FLOOR: f64 = 0.7;

type Outcome = (bool, String);

fn distortion_oracle() -> Outcome {
    let start = Instant::now();
    let f = radial_stretch(3.0).unwrap();
    let (mut worst_a, mut worst_fd) = (0.0f64, 0.0f64);
    for k in 0..100 {
        let r = 0.05 + 0.9 * (k as f64 + 0.5) / 100.0;
        let z = Complex64::from_polar(r, 2.399_963 * k as f64);
        let a = distortion(f.analytic_derivatives(z).unwrap()).value();
        let fd = distortion(wirtinger(&f, z, DEFAULT_FD_STEP).unwrap()).value();
        worst_a = worst_a.max((a - 3.0).abs());
        worst_fd = worst_fd.max((fd - 3.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst_a <= ANALYTIC_TOL && worst_fd <= FD_TOL && secs < DISTORTION_BUDGET_S,
        format!("max |K-3| analytic {worst_a:.2e}, difference {worst_fd:.2e}; {secs:.3}s"),
    )
}

fn modulus_convergence() -> Outcome {
    let ring = Ring::centered(1.0, E).unwrap();
    let solve = |kind, n| {
        discrete_modulus(&CurveFamilySpec::new(kind, ring), &DiscreteConfig::square(n))
            .unwrap()
            .result
            .value
    };
    let start = Instant::now();
    let fine = solve(CurveKind::Connecting, 512);
    let secs = start.elapsed().as_secs_f64();
    let coarse = solve(CurveKind::Connecting, 128);
    let sep = solve(CurveKind::Separating, 128);
    let (ef, ec) = ((fine - 2.0 * PI).abs() / (2.0 * PI), (coarse - 2.0 * PI).abs() / (2.0 * PI));
    let product = coarse * sep;
    (
        ef <= MODULUS_FINE_TOL && ec <= MODULUS_COARSE_TOL && secs < MODULUS_BUDGET_S && (product - 1.0).abs() <= DUALITY_TOL,
        format!("512²: {fine:.5} ({ef:.2e}, {secs:.2}s); 128²: {coarse:.5} ({ec:.2e}); duality {product:.5}"),
    )
}

fn extremal_identities() -> Outcome {
    let (mut worst_norm, mut worst_id, mut worst_circle) = (0.0f64, 0.0f64, 0.0f64);
    let mut members = 0;
    for f in battery_maps() {
        for ring in battery_rings() {
            members += 1;
            let g = f.clone();
            let ext = extremal_weight_ring(move |z| g.distortion_at(z), &ring).unwrap();
            worst_norm = worst_norm.max((ext.weight.integral(&ring) - 1.0).abs());
            let rhs = ring_rhs(|z| f.distortion_at(z), &ring, &ext.weight).unwrap().value;
            let target = 2.0 * PI / ext.i_integral;
            worst_id = worst_id.max((rhs - target).abs() / target);
            let grid = PolarGrid::new(ring, 32, 64, RadialSpacing::Geometric).unwrap();
            let rho = extremal_density_lower(|z| f.distortion_at(z), &grid, &Domain::plane()).unwrap();
            for i in 0..grid.n_radial() {
                worst_circle = worst_circle.max((rho.circle_integral(i) - 1.0).abs());
            }
        }
    }
    (
        members == 15
            && worst_norm <= NORMALISATION_TOL
            && worst_id <= EXTREMAL_IDENTITY_TOL
            && worst_circle <= DENSITY_CIRCLE_TOL,
        format!(
            "{members} members; |∫η₀-1| ≤ {worst_norm:.1e}, ring functional vs 2π/I ≤ {worst_id:.1e}, ρ₀ circles ≤ {worst_circle:.1e}"
        ),
    )
}

fn modulus_inequalities() -> Outcome {
    let mut violations = 0;
    let mut checked = 0;
    for f in battery_maps() {
        for ring in battery_rings() {
            let g = f.clone();
            let i = extremal_weight_ring(move |z| g.distortion_at(z), &ring).unwrap().i_integral;
            let conn = image_annulus_modulus(&f, &ring, CurveKind::Connecting).unwrap();
            let sep = image_annulus_modulus(&f, &ring, CurveKind::Separating).unwrap();
            let lower = lower_rhs(|z| f.distortion_at(z), ring.center(), ring.inner(), ring.outer(), f.domain()).unwrap();
            checked += 2;
            violations += usize::from(conn > 2.0 * PI / i * (1.0 + 1e-9));
            violations += usize::from(sep < lower * (1.0 - 1e-9));
        }
    }
    (violations == 0, format!("{checked} inequalities, {violations} violations"))
}

fn distortion_bound_suite() -> Outcome {
    let design = SampleDesign::default();
    let mut reports = 0;
    let mut failures = Vec::new();
    for f in battery_maps() {
        for ring in battery_rings() {
            for rep in [
                mean_distortion_check(&f, &ring, DEFAULT_GAP, &design).unwrap(),
                power_bound_check(&f, &ring, DEFAULT_GAP, &design).unwrap(),
            ] {
                reports += 1;
                if !rep.pass || rep.samples.len() != 10_000 {
                    failures.push(format!("{}:{}:{ring}", rep.name, f.label()));
                }
            }
        }
        let rep = disk_power_check(&f, &design).unwrap();
        reports += 1;
        if !rep.pass || rep.samples.len() != 10_000 {
            failures.push(format!("disk-power:{}", f.label()));
        }
    }
    let c = disk_hypothesis_constant(&radial_stretch(2.0).unwrap());
    let c_ok = (c - 4.0 * PI).abs() <= CLOSED_FORM_TOL;
    (
        failures.is_empty() && c_ok,
        format!(
            "{reports} reports × 10⁴ samples, failures {failures:?}; radial_stretch(2) c = {c:.9} (4π = {:.9})",
            4.0 * PI
        ),
    )
}

type Field = Box<dyn Fn(Complex64) -> f64>;
type Criterion = fn() -> Outcome;

fn phi_mean_suite() -> Outcome {
    let worked = phi_mean_inequality("one", |_| 1.0, &PhiFunction::exp(), 1.0, &[0.1]).unwrap();
    let s = worked.samples[0];
    let worked_ok = (s.lhs - std::f64::consts::LN_10).abs() <= WORKED_CASE_TOL && (s.rhs - 0.5153).abs() <= WORKED_CASE_TOL;
    let phis = [
        PhiFunction::exp(),
        PhiFunction::new("one_plus_square", |t: f64| 1.0 + t * t, true).unwrap(),
    ];
    let eps = [0.5, 0.1, 0.01];
    let maps = battery_maps();
    let mut runs = 0;
    let mut failures = Vec::new();
    let mut fields: Vec<(String, Field)> = vec![("one".into(), Box::new(|_| 1.0))];
    for f in &maps {
        let g = f.clone();
        fields.push((f.label().into(), Box::new(move |z| g.distortion_at(z))));
    }
    for (label, q) in &fields {
        for phi in &phis {
            for p in [0.5, 1.0, 2.0] {
                runs += 1;
                let rep = phi_mean_inequality(label, q, phi, p, &eps).unwrap();
                if !rep.pass {
                    failures.push(format!("{label}|{}|{p}", phi.label()));
                }
            }
        }
    }
    (
        worked_ok && failures.is_empty(),
        format!(
            "worked case {:.4} ≥ {:.4}; {runs} (Q, Φ, p) runs, failures {failures:?}",
            s.lhs, s.rhs
        ),
    )
}

fn equivalence() -> Outcome {
    let phis = [PhiFunction::exp(), PhiFunction::square(), PhiFunction::exp_sqrt()];
    let schedule = CutoffSchedule::default();
    let classifier = GrowthClassifier::default();
    let b = equivalence_battery(&phis, &[0.5, 1.0, 2.0], &schedule, &classifier);
    let exp = classify_condition(&phis[0], 1.0, Condition::PhiInverse, None, &schedule, &classifier).unwrap();
    (
        b.all_agree && b.monotone_in_p && exp.verdict == Verdict::Divergent,
        format!(
            "{} rows agree: {}; monotone in p: {}; exp under phi-inverse: {}",
            b.rows.len(),
            b.all_agree,
            b.monotone_in_p,
            exp.verdict.as_str()
        ),
    )
}

fn probes() -> Outcome {
    let origin = Complex64::new(0.0, 0.0);
    let targets = default_probe_targets();
    let cfg = ProbeConfig::default();
    let stretches: Vec<_> = [1.0, 1.5, 2.0, 2.5, 3.0].iter().map(|&a| radial_stretch(a).unwrap()).collect();
    let uniform = equicontinuity_probe(&stretches, origin, &targets, &cfg).uniform;
    let shrinking = shrinking_stretch_family(&[1, 10, 100, 1000]).unwrap();
    let table = equicontinuity_probe(&shrinking, origin, &targets, &cfg);
    let demo = counterexample_family(&PhiFunction::identity(), 4.0 * PI, DEFAULT_GAP, &targets, &cfg).unwrap();
    let members = demo.memberships.iter().all(|m| m.member);
    let error_path = matches!(
        counterexample_family(&PhiFunction::exp(), 4.0 * PI, DEFAULT_GAP, &targets, &cfg),
        Err(Error::HypothesisFails(_))
    );
    (
        uniform && !table.uniform && table.max_gap >= GAP_FLOOR && members && !demo.table.uniform && error_path,
        format!(
            "stretches uniform {uniform}; shrinking uniform {} gap {:.4}; demo members {members} uniform {}; exp error path {error_path}",
            table.uniform, table.max_gap, demo.table.uniform
        ),
    )
}

const DETERMINISM_CONFIG: &str = r#"
seed = 2024
[[scenario]]
command = "bounds"
maps = ["radial_stretch:3", "log_type"]
rings = ["0.05:0.5", "0.2:0.4"]
sample_radii = 20
sample_angles = 20

[[scenario]]
command = "phi"
phis = ["exp", "square"]
ps = [0.5, 1.0, 2.0]

[[scenario]]
command = "equicontinuity"
maps = ["shrinking:1", "shrinking:10", "shrinking:1000"]
expect_uniform = false
"#;

fn csv_snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.toml");
    std::fs::write(&cfg, DETERMINISM_CONFIG).unwrap();
    let mut snaps = Vec::new();
    for (run, workers) in [("a", "1"), ("b", "3")] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_qclab"))
            .args(["run", "--config", cfg.to_str().unwrap(), "--workers", workers, "--out"])
            .arg(&out)
            .output()
            .unwrap()
            .status;
        if !status.success() {
            return (false, format!("run {run} exited with {status}"));
        }
        snaps.push(csv_snapshot(&out));
    }
    let same = snaps[0] == snaps[1] && !snaps[0].is_empty();
    (same, format!("{} CSV files compared byte for byte", snaps[0].len()))
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("distortion oracle", distortion_oracle),
        ("modulus convergence", modulus_convergence),
        ("extremal identities", extremal_identities),
        ("image modulus inequalities", modulus_inequalities),
        ("distortion bound suite", distortion_bound_suite),
        ("phi-mean inequality suite", phi_mean_suite),
        ("condition equivalence battery", equivalence),
        ("equicontinuity probes and counterexample", probes),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = check();
        failed += usize::from(!pass);
        println!(
            "{} [{}] {name}: {detail} ({:.2}s)",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
