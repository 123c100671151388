use std::path::Path;
use std::process::Command;

fn qclab(args: &[&str], out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qclab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

#[test]
fn bounds_command_passes_and_writes_the_bound_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = qclab(&["bounds", "--map", "radial_stretch:3", "--ring", "0.1:0.5"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let table = std::fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    let header = table.lines().next().unwrap();
    assert_eq!(header, "scenario,bound,map,ring,radius,angle,lhs,rhs,pass");
    assert!(table.lines().any(|l| l.contains(",mean-distortion,radial_stretch:3,0.1:0.5,")));
    let checks = std::fs::read_to_string(dir.path().join("checks.csv")).unwrap();
    assert!(checks.contains("mean-distortion:radial_stretch:3:0.1:0.5,pass"));
}

#[test]
fn phi_command_reports_all_divergent_for_exp() {
    let dir = tempfile::tempdir().unwrap();
    let o = qclab(&["phi", "--phi", "exp", "--conditions", "all"], dir.path());
    assert!(o.status.success());
    let table = std::fs::read_to_string(dir.path().join("phi.csv")).unwrap();
    let rows: Vec<&str> = table.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.ends_with(",divergent")), "{table}");
}

#[test]
fn empty_scenario_list_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.toml");
    std::fs::write(&cfg, "seed = 1\n").unwrap();
    let o = qclab(&["run", "--config", cfg.to_str().unwrap()], &dir.path().join("out"));
    assert!(o.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    assert_eq!(report["scenarios"].as_array().unwrap().len(), 0);
    assert_eq!(report["pass"], true);
}

#[test]
fn failing_check_sets_exit_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.toml");
    std::fs::write(
        &cfg,
        "[[scenario]]\ncommand = \"modulus\"\nrings = [\"1:2.718281828459045\"]\nmaps = [\"identity\"]\ngrid = 8\ntolerance = 1e-9\n",
    )
    .unwrap();
    let o = qclab(&["run", "--config", cfg.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn diagnostics_name_the_bad_selector_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = qclab(&["bounds", "--map", "warp:2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown map selector 'warp:2'"));

    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[[scenario]]\ncommand = \"phi\"\nfunctions = [\"exp\"]\n").unwrap();
    let o = qclab(&["run", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("functions") && err.contains("line 3"), "{err}");
}

#[test]
fn dump_config_echoes_overrides_as_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = qclab(&["equicontinuity", "--seed", "9", "--map", "shrinking:10", "--dump-config"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["scenario"][0]["command"], "equicontinuity");
    assert_eq!(v["scenario"][0]["maps"][0], "shrinking:10");
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn config_profiles_resolve_as_maps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("profile.toml");
    std::fs::write(
        &cfg,
        r#"
[[profile]]
name = "tabulated"
radii = [0.001, 0.1, 1.0]
distortion = [2.0, 1.5, 1.0]

[[scenario]]
command = "bounds"
maps = ["tabulated"]
rings = ["0.1:0.5"]
sample_radii = 10
sample_angles = 10
"#,
    )
    .unwrap();
    let o = qclab(&["run", "--config", cfg.to_str().unwrap(), "--format", "csv"], &dir.path().join("out"));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(!dir.path().join("out/report.json").exists());
    assert!(std::fs::read_to_string(dir.path().join("out/bounds.csv")).unwrap().contains("tabulated"));
}
