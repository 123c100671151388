//! Scenario execution.

use std::f64::consts::PI;
use std::time::Instant;

use anyhow::Context as _;
use num_complex::Complex64;
use qclab_core::geometry::Ring;
use qclab_core::mappings::{distortion, wirtinger, MappingModel, DEFAULT_FD_STEP, LOG_MAP_CORE};
use qclab_core::means::{
    default_epsilon_schedule, divergence_at_zero, fmo_estimate, i_integral, log_radii, log_singularity_fit, FmoConfig,
    FnProfile, MeanProfile,
};
use qclab_core::modulus::{
    annulus_modulus, discrete_modulus, extremal_weight_ring, ring_rhs, CurveFamilySpec, CurveKind, DiscreteConfig,
};
use qclab_core::phi::{
    classify_condition, equivalence_battery, phi_inverse_of_phi_check, CutoffSchedule, PhiFunction,
};
use qclab_core::verification::{
    self, counterexample_family, default_probe_targets, distortion_mean, equicontinuity_probe, BoundReport,
    HypothesisStatus, ProbeConfig, SampleDesign, TransferOutcome, DEFAULT_GAP,
};
use qclab_core::{Error as CoreError, GrowthClassifier};
use serde_json::{json, Value};

use crate::config::{Command, ProfileSpec, Scenario};
use crate::report::{
    BoundRow, Check, ContinuityRow, DistortionRow, MembershipRow, PhiRow, ScenarioReport, Status, Tables, ValueRow,
};
use crate::select;

pub const BATTERY_MAPS: [&str; 5] = ["identity", "radial_stretch:2", "radial_stretch:3", "log_type", "shrinking:10"];
pub const BATTERY_RINGS: [&str; 3] = ["0.05:0.5", "0.1:0.9", "0.2:0.4"];

/// Relative agreement required between analytic and difference-quotient
/// distortion values.
pub const FD_AGREEMENT: f64 = 1e-3;
/// `∫η₀ dr = 1`.
pub const WEIGHT_NORMALISATION_TOL: f64 = 1e-8;
/// `ring_rhs(K, η₀) = 2π/I`, relative.
pub const EXTREMAL_IDENTITY_TOL: f64 = 5e-3;

/// Shared inputs for every scenario of a run.
#[derive(Debug, Clone, Default)]
pub struct Context {
    pub seed: u64,
    pub profiles: Vec<ProfileSpec>,
}

struct Run<'a> {
    name: String,
    seed: u64,
    scn: &'a Scenario,
    ctx: &'a Context,
    checks: Vec<Check>,
    tables: Tables,
}

impl<'a> Run<'a> {
    fn check(&mut self, module: &str, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check {
            scenario: self.name.clone(),
            module: module.into(),
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn list<'b>(&'b self, given: &'b [String], default: &'b [&'b str]) -> Vec<String> {
        if given.is_empty() {
            default.iter().map(|s| s.to_string()).collect()
        } else {
            given.to_vec()
        }
    }

    fn maps(&self, default: &[&str]) -> anyhow::Result<Vec<MappingModel>> {
        self.list(&self.scn.maps, default)
            .iter()
            .map(|s| select::map(s, &self.ctx.profiles))
            .collect()
    }

    fn rings(&self, default: &[&str]) -> anyhow::Result<Vec<Ring>> {
        self.list(&self.scn.rings, default).iter().map(|s| select::ring(s)).collect()
    }

    fn phis(&self, default: &[&str]) -> anyhow::Result<Vec<PhiFunction>> {
        self.list(&self.scn.phis, default).iter().map(|s| select::phi(s)).collect()
    }

    fn ps(&self, default: &[f64]) -> Vec<f64> {
        if self.scn.ps.is_empty() {
            default.to_vec()
        } else {
            self.scn.ps.clone()
        }
    }

    fn design(&self, radii: usize, angles: usize) -> SampleDesign {
        SampleDesign {
            radii: self.scn.sample_radii.unwrap_or(radii),
            angles: self.scn.sample_angles.unwrap_or(angles),
            seed: self.seed,
        }
    }

    fn delta(&self) -> f64 {
        self.scn.delta.unwrap_or(DEFAULT_GAP)
    }
}

/// Executes one scenario. Selector and parameter errors abort the scenario;
/// numeric failures become failing checks.
pub fn run_scenario(scn: &Scenario, index: usize, ctx: &Context) -> anyhow::Result<ScenarioReport> {
    let start = Instant::now();
    let name = scn.label(index);
    let seed = scn.seed.unwrap_or(ctx.seed);
    let mut run = Run {
        name: name.clone(),
        seed,
        scn,
        ctx,
        checks: Vec::new(),
        tables: Tables::default(),
    };
    let details = match scn.command {
        Command::Distortion => run_distortion(&mut run),
        Command::Modulus => run_modulus(&mut run),
        Command::Means => run_means(&mut run),
        Command::Phi => run_phi(&mut run),
        Command::Bounds => run_bounds(&mut run),
        Command::Equicontinuity => run_equicontinuity(&mut run),
        Command::Necessity => run_necessity(&mut run),
        Command::FullBattery => run_full_battery(&mut run),
    }
    .with_context(|| format!("scenario '{name}'"))?;
    let pass = run.checks.iter().all(|c| c.status != Status::Fail);
    Ok(ScenarioReport {
        name,
        command: scn.command,
        seed,
        scenario: scn.clone(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        pass,
        checks: run.checks,
        details,
        tables: run.tables,
    })
}

fn run_distortion(run: &mut Run<'_>) -> anyhow::Result<Value> {
    let maps = run.maps(&BATTERY_MAPS)?;
    let design = run.design(10, 10);
    let mut out = Vec::new();
    for f in &maps {
        let origin = Complex64::new(0.0, 0.0);
        let reach = f.domain().boundary_distance(origin).unwrap_or(1.0).min(1.0);
        let (radii, angles) = design.draw(0.05 * reach, 0.95 * reach);
        let mut failures = 0usize;
        let mut worst: f64 = 0.0;
        for &r in &radii {
            for &a in &angles {
                let z = Complex64::from_polar(r, a);
                let analytic = f.analytic_derivatives(z).map(|d| distortion(d).value());
                let fd = wirtinger(f, z, DEFAULT_FD_STEP).ok().map(|d| distortion(d).value());
                let reference = analytic.unwrap_or_else(|| f.distortion_at(z));
                let agree = match (analytic, fd) {
                    (Some(a), Some(b)) => {
                        let err = (a - b).abs() / a.max(1.0);
                        worst = worst.max(err);
                        err <= FD_AGREEMENT
                    }
                    _ => true,
                };
                let pass = agree && reference >= 1.0 - 1e-12;
                failures += usize::from(!pass);
                run.tables.distortion.push(DistortionRow {
                    scenario: run.name.clone(),
                    map: f.label().into(),
                    x: z.re,
                    y: z.im,
                    analytic,
                    finite_difference: fd,
                    pass,
                });
            }
        }
        run.check(
            "distortion",
            format!("distortion:{}", f.label()),
            Status::from_pass(failures == 0),
            format!("{} points, {failures} failures, worst relative gap {worst:.3e}", design.len()),
        );
        out.push(json!({"map": f.label(), "points": design.len(), "failures": failures, "worst_relative_gap": worst}));
    }
    Ok(json!({ "maps": out }))
}

fn run_modulus(run: &mut Run<'_>) -> anyhow::Result<Value> {
    let rings = run.rings(&BATTERY_RINGS)?;
    let maps = run.maps(&BATTERY_MAPS)?;
    let grid = run.scn.grid.unwrap_or(64);
    let tol = run.scn.tolerance.unwrap_or(0.05);
    let mut ring_out = Vec::new();
    for ring in &rings {
        let conn = annulus_modulus(ring, CurveKind::Connecting);
        let sep = annulus_modulus(ring, CurveKind::Separating);
        let mut entry = json!({"ring": ring.to_string(), "connecting": conn, "separating": sep});
        for (kind, exact) in [(CurveKind::Connecting, conn), (CurveKind::Separating, sep)] {
            run.tables.modulus.push(ValueRow {
                scenario: run.name.clone(),
                map: String::new(),
                ring: ring.to_string(),
                quantity: format!("{kind}:closed-form"),
                value: exact,
                reference: None,
                verdict: String::new(),
            });
        }
        if grid > 0 {
            let mut discrete = [0.0; 2];
            for (k, (kind, exact)) in [(CurveKind::Connecting, conn), (CurveKind::Separating, sep)]
                .into_iter()
                .enumerate()
            {
                let sol = discrete_modulus(&CurveFamilySpec::new(kind, *ring), &DiscreteConfig::square(grid))?;
                let v = sol.result.value;
                discrete[k] = v;
                let err = (v - exact).abs() / exact;
                run.tables.modulus.push(ValueRow {
                    scenario: run.name.clone(),
                    map: String::new(),
                    ring: ring.to_string(),
                    quantity: format!("{kind}:discrete:{grid}"),
                    value: v,
                    reference: Some(exact),
                    verdict: if err <= tol { "pass" } else { "fail" }.into(),
                });
                run.check(
                    "modulus",
                    format!("discrete-{kind}:{ring}"),
                    Status::from_pass(err <= tol),
                    format!("grid {grid}: {v:.6} vs {exact:.6} (relative error {err:.3e}, tolerance {tol})"),
                );
            }
            let product = discrete[0] * discrete[1];
            run.check(
                "modulus",
                format!("duality:{ring}"),
                Status::from_pass((product - 1.0).abs() <= tol),
                format!("connecting × separating = {product:.6}"),
            );
            entry["discrete"] = json!({"grid": grid, "connecting": discrete[0], "separating": discrete[1]});
        }
        ring_out.push(entry);
    }
    let mut chains = Vec::new();
    for f in &maps {
        if f.radial().is_none() {
            continue;
        }
        for ring in &rings {
            if f.domain().boundary_distance(ring.center()).is_some_and(|d| d < ring.outer()) {
                run.check(
                    "modulus",
                    format!("chain:{}:{ring}", f.label()),
                    Status::NotApplicable,
                    format!("ring {ring} leaves the domain {}", f.domain().description()),
                );
                continue;
            }
            let chain = verification::modulus_chain_check(f, ring)?;
            run.check(
                "modulus",
                format!("chain:{}:{ring}", f.label()),
                Status::from_pass(chain.pass),
                format!(
                    "connecting {:.6} ≤ 2π/I = {:.6}; separating {:.6} ≥ {:.6}",
                    chain.image_connecting, chain.connecting_bound, chain.image_separating, chain.lower_bound
                ),
            );
            let g = f.clone();
            let extremal = extremal_weight_ring(move |z| g.distortion_at(z), ring)?;
            let norm = extremal.weight.integral(ring);
            let rhs = ring_rhs(|z| f.distortion_at(z), ring, &extremal.weight)?.value;
            let target = 2.0 * PI / extremal.i_integral;
            let identity_err = (rhs - target).abs() / target;
            let ok = (norm - 1.0).abs() <= WEIGHT_NORMALISATION_TOL && identity_err <= EXTREMAL_IDENTITY_TOL;
            run.check(
                "modulus",
                format!("extremal-weight:{}:{ring}", f.label()),
                Status::from_pass(ok),
                format!("∫η₀ = {norm:.10}; ring functional {rhs:.6} vs 2π/I = {target:.6}"),
            );
            for (quantity, value, reference) in [
                ("image-connecting", chain.image_connecting, Some(chain.connecting_bound)),
                ("image-separating", chain.image_separating, Some(chain.lower_bound)),
                ("extremal-ring-functional", rhs, Some(target)),
            ] {
                run.tables.modulus.push(ValueRow {
                    scenario: run.name.clone(),
                    map: f.label().into(),
                    ring: ring.to_string(),
                    quantity: quantity.into(),
                    value,
                    reference,
                    verdict: if chain.pass && ok { "pass" } else { "fail" }.into(),
                });
            }
            chains.push(serde_json::to_value(&chain)?);
        }
    }
    Ok(json!({"rings": ring_out, "chains": chains}))
}

fn run_means(run: &mut Run<'_>) -> anyhow::Result<Value> {
    let maps = run.maps(&BATTERY_MAPS)?;
    let rings = run.rings(&BATTERY_RINGS)?;
    let eps = if run.scn.eps.is_empty() {
        default_epsilon_schedule()
    } else {
        run.scn.eps.clone()
    };
    let origin = Complex64::new(0.0, 0.0);
    let classifier = GrowthClassifier::default();
    let mut out = Vec::new();
    for f in &maps {
        let q = distortion_mean(f, origin);
        let profile = FnProfile::new(|r: f64| q(r), 0.0, 1.0);
        let (div, _) = divergence_at_zero(&profile, 0.5, &classifier);
        let fmo = fmo_estimate(|z| f.distortion_at(z), origin, &eps, f.domain(), FmoConfig::default())?;
        let radii = log_radii(1e-8, 0.09, 4);
        let fit = log_singularity_fit(&MeanProfile::from_fn(origin, &radii, &q)?)?;
        let mut ring_values = Vec::new();
        for ring in &rings {
            let i = i_integral(&profile, ring.inner(), ring.outer())?;
            ring_values.push(json!({"ring": ring.to_string(), "i_integral": i}));
            run.tables.means.push(ValueRow {
                scenario: run.name.clone(),
                map: f.label().into(),
                ring: ring.to_string(),
                quantity: "i-integral".into(),
                value: i,
                reference: None,
                verdict: String::new(),
            });
        }
        let last = fmo.oscillations.last().copied().unwrap_or(f64::NAN);
        for (quantity, value, verdict) in [
            ("divergence-at-zero", div.tail_increase, div.verdict.as_str().to_string()),
            ("mean-oscillation", last, format!("{:?}", fmo.verdict).to_lowercase()),
            ("log-envelope", fit.envelope, format!("growth-order {:.3}", fit.growth_order)),
        ] {
            run.tables.means.push(ValueRow {
                scenario: run.name.clone(),
                map: f.label().into(),
                ring: String::new(),
                quantity: quantity.into(),
                value,
                reference: None,
                verdict,
            });
        }
        out.push(json!({
            "map": f.label(),
            "divergence_at_zero": div,
            "fmo": fmo,
            "log_fit": fit,
            "rings": ring_values,
        }));
    }
    Ok(json!({ "maps": out }))
}

fn run_phi(run: &mut Run<'_>) -> anyhow::Result<Value> {
    let phis = run.phis(&["exp", "square", "exp_sqrt"])?;
    let ps = run.ps(&[1.0]);
    let conditions = select::conditions(&run.scn.conditions)?;
    let schedule = CutoffSchedule::default();
    let classifier = GrowthClassifier::default();
    let samples: Vec<f64> = (0..=40).map(|k| 10f64.powf(-3.0 + k as f64 / 10.0)).collect();
    for phi in &phis {
        let inv = phi_inverse_of_phi_check(phi, &samples, 1e-8);
        run.check(
            "phi",
            format!("inverse:{}", phi.label()),
            Status::from_pass(inv.pass),
            format!("{} violations, {} strict samples", inv.violations.len(), inv.strict.len()),
        );
    }
    let battery = if conditions.len() == 6 {
        equivalence_battery(&phis, &ps, &schedule, &classifier)
    } else {
        let rows = phis
            .iter()
            .flat_map(|phi| ps.iter().map(move |&p| (phi, p)))
            .map(|(phi, p)| {
                let verdicts: Vec<_> = conditions
                    .iter()
                    .map(|&c| {
                        let v = classify_condition(phi, p, c, None, &schedule, &classifier)
                            .map(|v| v.verdict)
                            .map_err(|e| e.to_string());
                        (c, v)
                    })
                    .collect();
                let decisive: Vec<_> = verdicts.iter().filter_map(|(_, v)| v.as_ref().ok()).filter(|v| v.is_decisive()).collect();
                let agree = decisive.windows(2).all(|w| w[0] == w[1]);
                qclab_core::phi::BatteryRow {
                    phi: phi.label().into(),
                    p,
                    verdicts,
                    agree,
                }
            })
            .collect::<Vec<_>>();
        let all_agree = rows.iter().all(|r| r.agree);
        qclab_core::phi::EquivalenceBattery {
            rows,
            all_agree,
            monotone_in_p: true,
        }
    };
    for row in &battery.rows {
        for (c, v) in &row.verdicts {
            run.tables.phi.push(PhiRow {
                scenario: run.name.clone(),
                phi: row.phi.clone(),
                p: row.p,
                condition: c.as_str().into(),
                verdict: match v {
                    Ok(v) => v.as_str().into(),
                    Err(_) => "precondition".into(),
                },
            });
        }
        run.check(
            "phi",
            format!("agreement:{}:p={}", row.phi, row.p),
            Status::from_pass(row.agree),
            row.verdicts
                .iter()
                .map(|(c, v)| format!("{}={}", c.as_str(), v.as_ref().map_or("precondition", |v| v.as_str())))
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    if conditions.len() == 6 {
        run.check(
            "phi",
            "monotone-in-p",
            Status::from_pass(battery.monotone_in_p),
            "divergent verdicts persist as p increases",
        );
    }
    let rows: Vec<Value> = battery
        .rows
        .iter()
        .map(|r| {
            json!({
                "phi": r.phi,
                "p": r.p,
                "agree": r.agree,
                "verdicts": r.verdicts.iter().map(|(c, v)| json!({
                    "condition": c.as_str(),
                    "verdict": v.as_ref().map(|v| v.as_str()).ok(),
                    "error": v.as_ref().err(),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({"rows": rows, "all_agree": battery.all_agree, "monotone_in_p": battery.monotone_in_p}))
}

fn push_bound(run: &mut Run<'_>, rep: &BoundReport) {
    let ring = rep.ring.clone().unwrap_or_default();
    for s in &rep.samples {
        run.tables.bounds.push(BoundRow {
            scenario: run.name.clone(),
            bound: rep.name.clone(),
            map: rep.map.clone(),
            ring: ring.clone(),
            radius: s.radius,
            angle: s.angle,
            lhs: s.lhs,
            rhs: s.rhs,
            pass: s.pass,
        });
    }
    let status = if rep.hypothesis == HypothesisStatus::Violated {
        Status::NotApplicable
    } else {
        Status::from_pass(rep.pass)
    };
    let mut detail = format!(
        "{} samples, hypothesis {:?}, min margin {:.3e}",
        rep.samples.len(),
        rep.hypothesis,
        rep.min_margin
    )
    .to_lowercase();
    if let Some(d) = &rep.diagnosis {
        detail.push_str(&format!("; {d}"));
    }
    let name = if ring.is_empty() {
        format!("{}:{}", rep.name, rep.map)
    } else {
        format!("{}:{}:{ring}", rep.name, rep.map)
    };
    run.check("bounds", name, status, detail);
}

fn bound_summary(rep: &BoundReport) -> Value {
    json!({
        "name": rep.name,
        "map": rep.map,
        "ring": rep.ring,
        "relation": rep.relation,
        "hypothesis": rep.hypothesis,
        "diagnosis": rep.diagnosis,
        "parameters": rep.parameters,
        "samples": rep.samples.len(),
        "min_margin": rep.min_margin,
        "pass": rep.pass,
    })
}

fn unit_disk_map(f: &MappingModel) -> bool {
    let origin = Complex64::new(0.0, 0.0);
    f.domain().boundary_distance(origin) == Some(1.0) && f.domain().sup_distance(origin) == Some(1.0)
}

fn run_bounds(run: &mut Run<'_>) -> anyhow::Result<Value> {
    let maps = run.maps(&BATTERY_MAPS)?;
    let rings = run.rings(&BATTERY_RINGS)?;
    let phis = run.phis(&["exp"])?;
    let ps = run.ps(&[1.0]);
    let eps = if run.scn.eps.is_empty() {
        vec![0.5, 0.1, 0.01]
    } else {
        run.scn.eps.clone()
    };
    let delta = run.delta();
    let design = run.design(100, 100);
    let origin = Complex64::new(0.0, 0.0);
    let mut reports = Vec::new();
    let mut extra = Vec::new();
    for f in &maps {
        for ring in &rings {
            let mut reps = vec![
                verification::mean_distortion_check(f, ring, delta, &design)?,
                verification::weighted_exponential_check(f, ring, delta, &design)?,
            ];
            if ring.outer() < 1.0 {
                reps.push(verification::power_bound_check(f, ring, delta, &design)?);
            }
            for rep in reps {
                push_bound(run, &rep);
                reports.push(bound_summary(&rep));
            }
        }
        let eps0 = rings.iter().map(|r| r.outer()).fold(LOG_MAP_CORE, f64::min);
        let rep = verification::log_distortion_check(f, origin, eps0, delta, &design)?;
        push_bound(run, &rep);
        reports.push(bound_summary(&rep));
        if unit_disk_map(f) {
            match verification::disk_power_check(f, &design) {
                Ok(rep) => {
                    push_bound(run, &rep);
                    reports.push(bound_summary(&rep));
                }
                Err(CoreError::Precondition(msg)) => {
                    run.check("bounds", format!("disk-power:{}", f.label()), Status::NotApplicable, msg)
                }
                Err(e) => return Err(e.into()),
            }
        }
        match verification::fmo_power_fit(f, origin, &[0.5, 0.25, 0.1], delta, &design) {
            Ok(fit) => {
                run.check(
                    "bounds",
                    format!("fmo-power:{}", f.label()),
                    Status::from_pass(fit.pass),
                    format!("beta0 = {} at eps0 = {}", fit.beta0, fit.eps0),
                );
                extra.push(serde_json::to_value(&fit)?);
            }
            Err(CoreError::HypothesisFails(msg)) => {
                run.check("bounds", format!("fmo-power:{}", f.label()), Status::NotApplicable, msg)
            }
            Err(e) => return Err(e.into()),
        }
        if !unit_disk_map(f) {
            continue;
        }
        for phi in &phis {
            for &p in &ps {
                let k = |z: Complex64| f.distortion_at(z);
                let label = format!("{}|{}|p={p}", f.label(), phi.label());
                for rep in [
                    verification::phi_mean_inequality(&label, k, phi, p, &eps)?,
                    verification::truncated_phi_mean_inequality(&label, k, phi, p, 0.5, &eps)?,
                ] {
                    push_bound(run, &rep);
                    reports.push(bound_summary(&rep));
                }
                let t = verification::phi_divergence_transfer(&label, k, phi, p)?;
                let status = match t.outcome {
                    TransferOutcome::Pass => Status::Pass,
                    TransferOutcome::Fail => Status::Fail,
                    TransferOutcome::NotApplicable | TransferOutcome::Inconclusive => Status::NotApplicable,
                };
                run.check(
                    "bounds",
                    format!("divergence-transfer:{label}"),
                    status,
                    format!(
                        "∫Φ(K) = {:.6}, condition {}, conclusion {} ({:?})",
                        t.integral,
                        t.condition.as_str(),
                        t.conclusion.as_str(),
                        t.outcome
                    )
                    .to_lowercase(),
                );
                extra.push(serde_json::to_value(&t)?);
            }
        }
    }
    Ok(json!({"design": design, "delta": delta, "reports": reports, "fits_and_transfers": extra}))
}

fn push_table(run: &mut Run<'_>, table: &verification::ContinuityTable) {
    for m in &table.members {
        for (eps, delta) in table.targets.iter().zip(&m.deltas) {
            run.tables.continuity.push(ContinuityRow {
                scenario: run.name.clone(),
                member: m.map.clone(),
                eps: *eps,
                delta: *delta,
                gap: m.gap,
            });
        }
    }
}

fn targets(run: &Run<'_>) -> Vec<f64> {
    if run.scn.targets.is_empty() {
        default_probe_targets()
    } else {
        run.scn.targets.clone()
    }
}

fn run_equicontinuity(run: &mut Run<'_>) -> anyhow::Result<Value> {
    let maps = run.maps(&["radial_stretch:1", "radial_stretch:2", "radial_stretch:3"])?;
    let table = equicontinuity_probe(&maps, Complex64::new(0.0, 0.0), &targets(run), &ProbeConfig::default());
    push_table(run, &table);
    let detail = format!(
        "uniform = {}, infimum δ = {:?}, max gap at |z| = {} is {:.4}",
        table.uniform, table.infimum, table.probe_radius, table.max_gap
    );
    let status = match run.scn.expect_uniform {
        Some(expect) => Status::from_pass(expect == table.uniform),
        None => Status::NotApplicable,
    };
    run.check("equicontinuity", "probe", status, detail);
    Ok(serde_json::to_value(&table)?)
}

fn run_necessity(run: &mut Run<'_>) -> anyhow::Result<Value> {
    let phis = run.phis(&["identity"])?;
    let budget = run.scn.budget.unwrap_or(4.0 * PI);
    let delta = run.delta();
    let targets = targets(run);
    let mut out = Vec::new();
    for phi in &phis {
        match counterexample_family(phi, budget, delta, &targets, &ProbeConfig::default()) {
            Ok(fam) => {
                for m in &fam.memberships {
                    run.tables.membership.push(MembershipRow {
                        scenario: run.name.clone(),
                        map: m.map.clone(),
                        weighted_integral: m.weighted_integral,
                        unweighted_integral: m.unweighted_integral,
                        omitted_diameter: m.omitted_diameter,
                        budget: m.budget,
                        gap: m.gap,
                        member: m.member,
                    });
                }
                push_table(run, &fam.table);
                let members = fam.memberships.iter().all(|m| m.member);
                run.check(
                    "necessity",
                    format!("counterexample:{}", phi.label()),
                    Status::from_pass(members && !fam.table.uniform),
                    format!(
                        "{} members, all in class: {members}, uniform: {}, max gap {:.4}",
                        fam.members.len(),
                        fam.table.uniform,
                        fam.table.max_gap
                    ),
                );
                out.push(json!({
                    "phi": phi.label(),
                    "level": fam.level,
                    "cores": fam.cores,
                    "memberships": fam.memberships,
                    "table": fam.table,
                }));
            }
            Err(CoreError::HypothesisFails(msg)) => {
                run.check(
                    "necessity",
                    format!("counterexample:{}", phi.label()),
                    Status::NotApplicable,
                    format!("error path: {msg}"),
                );
                out.push(json!({"phi": phi.label(), "error": msg}));
            }
            Err(e) => {
                run.check("necessity", format!("counterexample:{}", phi.label()), Status::Fail, e.to_string());
                out.push(json!({"phi": phi.label(), "error": e.to_string()}));
            }
        }
    }
    Ok(json!({"budget": budget, "delta": delta, "families": out}))
}

/// Every module with defaults sized for a quick end-to-end run.
fn run_full_battery(run: &mut Run<'_>) -> anyhow::Result<Value> {
    let mut details = serde_json::Map::new();
    let sub = |command: Command| {
        let mut s = Scenario::new(command);
        s.seed = Some(run.seed);
        s
    };
    let mut parts: Vec<(&str, Scenario)> = Vec::new();
    parts.push(("distortion", sub(Command::Distortion)));
    let mut m = sub(Command::Modulus);
    m.grid = Some(32);
    m.tolerance = Some(0.1);
    parts.push(("modulus", m));
    parts.push(("means", sub(Command::Means)));
    let mut ph = sub(Command::Phi);
    ph.ps = vec![0.5, 1.0, 2.0];
    parts.push(("phi", ph));
    let mut b = sub(Command::Bounds);
    b.sample_radii = Some(20);
    b.sample_angles = Some(20);
    parts.push(("bounds", b));
    let mut e = sub(Command::Equicontinuity);
    e.expect_uniform = Some(true);
    parts.push(("equicontinuity-stretch", e));
    let mut e = sub(Command::Equicontinuity);
    e.maps = ["shrinking:1", "shrinking:10", "shrinking:100", "shrinking:1000"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    e.expect_uniform = Some(false);
    parts.push(("equicontinuity-shrinking", e));
    let mut n = sub(Command::Necessity);
    n.phis = vec!["identity".into(), "exp".into()];
    parts.push(("necessity", n));
    for (key, scn) in parts {
        let mut inner = Run {
            name: format!("{}/{key}", run.name),
            seed: run.seed,
            scn: &scn,
            ctx: run.ctx,
            checks: Vec::new(),
            tables: Tables::default(),
        };
        let value = match scn.command {
            Command::Distortion => run_distortion(&mut inner),
            Command::Modulus => run_modulus(&mut inner),
            Command::Means => run_means(&mut inner),
            Command::Phi => run_phi(&mut inner),
            Command::Bounds => run_bounds(&mut inner),
            Command::Equicontinuity => run_equicontinuity(&mut inner),
            Command::Necessity => run_necessity(&mut inner),
            Command::FullBattery => unreachable!("nested battery"),
        }
        .with_context(|| format!("battery part '{key}'"))?;
        run.checks.extend(inner.checks);
        run.tables.extend(inner.tables);
        details.insert(key.into(), value);
    }
    Ok(Value::Object(details))
}
