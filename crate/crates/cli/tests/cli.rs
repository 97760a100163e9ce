use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grover-slocc"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().args(args).arg("--out").arg(dir).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const DELTA: &str = "experiment = \"delta-curve\"\n[system]\ndims = [2, 2, 2]\n[marked]\nkets = [\"000\"]\n[range]\nend_k_opt = 4.0\nsamples_per_iteration = 4\n";

#[test]
fn nrd_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "nrd.toml", "experiment = \"nrd\"\n[nrd]\nn_max = 6\n");
    let out = run_in(dir.path(), &["nrd", "--config", &cfg, "--format", "csv+svg"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("nrd.csv")).unwrap();
    assert!(csv.contains("\nn,nrd\n1.0,1.0\n"));
    assert!(fs::read_to_string(dir.path().join("nrd.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = write(a.path(), "d.toml", DELTA);
    for dir in [a.path(), b.path()] {
        assert!(run_in(dir, &["delta-curve", "--config", &cfg]).status.success());
    }
    let x = fs::read(a.path().join("delta_curve.csv")).unwrap();
    let y = fs::read(b.path().join("delta_curve.csv")).unwrap();
    assert_eq!(x, y);
}

#[test]
fn seed_override_enters_the_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "g.toml",
        "experiment = \"gme-curve\"\nseed = 1\n[system]\ndims = [2, 2, 2, 2]\n[marked]\nkets = [\"0000\"]\n[optimizer]\nrestarts = 4\n[gme]\nq = \"n\"\n",
    );
    let out = run_in(dir.path(), &["gme-curve", "--config", &cfg, "--seed", "99"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("gme_curve.csv")).unwrap();
    assert!(csv.contains("# seed: 99\n"));
    assert!(csv.contains("#| seed = 99\n"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("k* ="));
}

#[test]
fn tables_without_config_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["tables"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["tables_222.csv", "tables_223.csv", "tables_233.csv"] {
        let text = fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(text.contains("# failed: 0\n") && !text.contains(",FAIL"), "{f}");
    }
}

#[test]
fn invalid_configs_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("bad.toml", "experiment = \"nrd\"\n[nrd]\nn_max = 0\n", "nrd"),
        ("seedless.toml", "experiment = \"gme-curve\"\n[system]\ndims = [2, 2]\n[marked]\nkets = [\"00\"]\n[gme]\nq = \"2\"\n", "gme-curve"),
        ("kind.toml", DELTA, "simulate"),
        ("syntax.toml", "experiment = [", "nrd"),
        ("dims.toml", "experiment = \"delta-curve\"\n[system]\ndims = [2]\n[marked]\nkets = [\"3\"]\n", "delta-curve"),
    ];
    for (name, text, cmd) in cases {
        let cfg = write(dir.path(), name, text);
        let out = run_in(dir.path(), &[cmd, "--config", &cfg]);
        assert_eq!(out.status.code(), Some(1), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let missing = run_in(dir.path(), &["nrd", "--config", "/nonexistent.toml"]);
    assert_eq!(missing.status.code(), Some(1));
    let flag = run_in(dir.path(), &["nrd", "--format", "png"]);
    assert_eq!(flag.status.code(), Some(1));
}

#[test]
fn unsupported_format_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "experiment = \"classify\"\n[system]\ndims = [2, 2, 2, 2]\n[marked]\nkets = [\"0000\"]\n");
    let out = run_in(dir.path(), &["classify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let out = bin().arg("--help").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for cmd in ["simulate", "classify", "delta-curve", "gme-curve", "nrd", "tables", "peak-scan"] {
        assert!(text.contains(cmd), "{cmd}");
    }
}
