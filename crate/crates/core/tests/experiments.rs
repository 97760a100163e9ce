use grover_slocc::experiments::{
    run, run_delta_curve, CurveArtifact, ExperimentConfig, OutputFormat, TableArtifact,
};
use grover_slocc::grover::grover_state;
use grover_slocc::invariants::delta;

const DELTA_233: &str = r#"
experiment = "delta-curve"

[system]
dims = [2, 3, 3]

[marked]
kets = ["000", "011", "100", "111"]

[range]
end_k_opt = 4.0
"#;

const GME: &str = r#"
experiment = "gme-curve"
seed = 5

[system]
dims = [2, 2, 2, 2, 2, 2]

[marked]
digits = [[0, 0, 0, 0, 0, 0], [1, 1, 1, 1, 1, 1]]

[optimizer]
restarts = 6

[gme]
q = "n"

[output]
format = "csv+svg"
"#;

#[test]
fn delta_curve_matches_direct_evaluation() {
    let cfg = ExperimentConfig::from_toml_str(DELTA_233).unwrap();
    let marked = cfg.marked_set().unwrap();
    let curve = run_delta_curve(&cfg).unwrap();
    assert_eq!(curve.points.len(), cfg.k_values(&marked).len());
    for &(t, v) in &curve.points {
        let (psi, _) = grover_state(&marked, t as u64).unwrap();
        assert!((delta(&psi).unwrap().norm() - v).abs() < 1e-12, "k = {t}");
    }
}

#[test]
fn reruns_give_identical_bytes() {
    for text in [DELTA_233, GME] {
        let cfg = ExperimentConfig::from_toml_str(text).unwrap();
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn artifacts_carry_their_config() {
    let cfg = ExperimentConfig::from_toml_str(GME).unwrap();
    let out = run(&cfg).unwrap();
    let names: Vec<&str> = out.files.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(names, ["gme_curve.csv", "gme_curve.svg"]);
    let curve = CurveArtifact::from_csv_str(&out.files[0].contents).unwrap();
    assert_eq!(curve.metadata.config_hash, cfg.hash());
    assert_eq!(curve.metadata.seed, Some(5));
    let back = ExperimentConfig::from_toml_str(&curve.metadata.config).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(curve.to_csv(), out.files[0].contents);
    assert!(out.files[1].contents.starts_with("<svg"));
    assert!(curve.points.windows(2).all(|w| w[0].0 < w[1].0));
}

#[test]
fn files_land_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::from_toml_str(DELTA_233).unwrap();
    cfg.output = Some(grover_slocc::experiments::OutputSection {
        name: Some("d233".into()),
        format: OutputFormat::Csv,
        ..Default::default()
    });
    let paths = run(&cfg).unwrap().write_to(dir.path()).unwrap();
    assert_eq!(paths, [dir.path().join("d233.csv")]);
    let text = std::fs::read_to_string(&paths[0]).unwrap();
    assert!(text.contains("# regime: standard"));
}

#[test]
fn tables_and_simulation() {
    let cfg = ExperimentConfig::from_toml_str("experiment = \"tables\"\n[tables]\nformats = [\"223\"]").unwrap();
    let out = run(&cfg).unwrap();
    assert_eq!(out.golden_failures, 0);
    let t = TableArtifact::from_csv_str(&out.files[0].contents).unwrap();
    assert!(t.column("status").unwrap().iter().all(|s| *s == "PASS"));
    assert_eq!(t.metadata.get("failed"), Some("0"));

    let sim = ExperimentConfig::from_toml_str(
        "experiment = \"simulate\"\n[system]\ndims = [2, 2, 2]\n[marked]\nkets = [\"000\", \"111\"]\n[range]\nend = 3",
    )
    .unwrap();
    let t = TableArtifact::from_csv_str(&run(&sim).unwrap().files[0].contents).unwrap();
    assert_eq!(t.metadata.get("regime"), Some("critical"));
    let p: Vec<f64> = t.column("p_marked").unwrap().iter().map(|s| s.parse().unwrap()).collect();
    assert!((p[1] - 1.0).abs() < 1e-12);
}

#[test]
fn seed_changes_the_hash() {
    let mut cfg = ExperimentConfig::from_toml_str(GME).unwrap();
    let h = cfg.hash();
    cfg.seed = Some(6);
    assert_ne!(cfg.hash(), h);
}

#[test]
fn o9_family_delta_vanishes_along_trajectory() {
    let cfg = ExperimentConfig::from_toml_str(DELTA_233).unwrap();
    let curve = run_delta_curve(&cfg).unwrap();
    let worst = curve.points.iter().map(|p| p.1).fold(0.0, f64::max);
    assert!(worst < 1e-14, "max normalized delta {worst:e}");
}
