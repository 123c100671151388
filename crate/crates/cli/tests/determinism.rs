use qclab::{emit, run, Config, Format};

const CONFIG: &str = r#"
seed = 42
[[scenario]]
command = "bounds"
maps = ["radial_stretch:2", "log_type"]
rings = ["0.05:0.5"]
sample_radii = 12
sample_angles = 12

[[scenario]]
command = "equicontinuity"
maps = ["shrinking:1", "shrinking:1000"]
expect_uniform = false

[[scenario]]
command = "distortion"
maps = ["radial_stretch:3"]
"#;

fn csv_bytes(workers: usize) -> Vec<(String, Vec<u8>)> {
    let cfg = Config::parse(CONFIG).unwrap();
    let report = run(&cfg, workers).unwrap();
    assert!(report.pass);
    let dir = tempfile::tempdir().unwrap();
    let mut files: Vec<_> = emit(&report, dir.path(), Format::Csv)
        .unwrap()
        .into_iter()
        .map(|f| {
            let bytes = std::fs::read(dir.path().join(&f)).unwrap();
            (f, bytes)
        })
        .collect();
    files.sort();
    files
}

#[test]
fn identical_config_and_seed_give_identical_tables() {
    let a = csv_bytes(1);
    let b = csv_bytes(4);
    assert_eq!(a.len(), b.len());
    for ((fa, ba), (fb, bb)) in a.iter().zip(&b) {
        assert_eq!(fa, fb);
        assert!(ba == bb, "{fa} differs");
    }
}

#[test]
fn seed_changes_the_sample_cloud() {
    let cfg = Config::parse(CONFIG).unwrap();
    let mut other = cfg.clone();
    other.seed = 43;
    let a = run(&cfg, 2).unwrap().tables().bounds;
    let b = run(&other, 2).unwrap().tables().bounds;
    assert_ne!(a[0].radius, b[0].radius);
}
