use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn modspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn unknown_suite_exits_2() {
    let out = modspace(&["run", "--suite", "bogus"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn run_writes_summary_checks_and_suite_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = modspace(&[
        "run", "--suite", "dilation", "--dims", "2,4", "--samples", "3", "--out", path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["suite"], "dilation");
    assert_eq!(summary["n_checks"], summary["n_pass"]);
    assert!(summary["worst_residual"].as_f64().unwrap() < 1e-8);
    let stdout: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stdout, summary);
    let checks = fs::read_to_string(dir.path().join("checks.csv")).unwrap();
    assert!(checks.starts_with("suite,identity_name,residual,tolerance,pass"));
    assert!(dir.path().join("dilation.csv").exists());
}

#[test]
fn impossible_tolerance_exits_1_and_names_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = modspace(&[
        "run", "--suite", "modular-identities", "--dims", "2", "--samples", "2", "--tol", "1e-300",
        "--out", path(dir.path()),
    ]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FAILED"), "{err}");
}

#[test]
fn csv_format_prints_the_check_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = modspace(&[
        "run", "--suite", "helmholtz", "--format", "csv", "--out", path(dir.path()),
    ]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("suite,identity_name"));
    assert_eq!(stdout, fs::read_to_string(dir.path().join("checks.csv")).unwrap());
    for f in ["helmholtz_spectrum.csv", "helmholtz_forms.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn entropy_report_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = modspace(&["run", "--suite", "entropy", "--grid-n", "4096", "--out", path(dir.path())]);
    assert_eq!(code(&out), 0);
    let reps: Vec<serde_json::Value> =
        serde_json::from_slice(&fs::read(dir.path().join("entropy.json")).unwrap()).unwrap();
    assert_eq!(reps.len(), 10);
    for rep in reps {
        let closed = rep["closed_form"].as_f64().unwrap();
        let modular = rep["modular_route"].as_f64().unwrap();
        assert!((closed - modular).abs() <= 0.01 * closed, "{rep}");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let cfg_out = dir.path().join("from-config");
    let flag_out = dir.path().join("from-flag");
    fs::write(
        &cfg,
        format!("seed = 4\ndims = [6]\nsamples = 2\nout = {:?}\n", path(&cfg_out)),
    )
    .unwrap();
    let out = modspace(&["run", "--suite", "dilation", "--config", path(&cfg)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let checks = fs::read_to_string(cfg_out.join("checks.csv")).unwrap();
    assert!(checks.contains("[N=6]"));

    let out = modspace(&[
        "run", "--suite", "dilation", "--config", path(&cfg), "--dims", "2", "--out", path(&flag_out),
    ]);
    assert_eq!(code(&out), 0);
    let checks = fs::read_to_string(flag_out.join("checks.csv")).unwrap();
    assert!(checks.contains("[N=2]") && !checks.contains("[N=6]"));
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "sede = 1\n").unwrap();
    assert_eq!(code(&modspace(&["run", "--suite", "dilation", "--config", path(&cfg)])), 2);
    fs::write(&cfg, "dims = []\n").unwrap();
    assert_eq!(code(&modspace(&["run", "--suite", "dilation", "--config", path(&cfg)])), 2);
    assert_eq!(code(&modspace(&["run", "--suite", "dilation", "--dims", "3"])), 2);
}

#[test]
fn same_seed_gives_identical_csv() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = modspace(&[
            "run", "--suite", "bogoliubov", "--dims", "2,4", "--samples", "4", "--seed", "17",
            "--out", path(d.path()),
        ]);
        assert_eq!(code(&out), 0);
    }
    for f in ["checks.csv", "bogoliubov_blocks.csv", "shale.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn mass_scan_is_increasing() {
    let dir = tempfile::tempdir().unwrap();
    let out = modspace(&[
        "scan", "--quantity", "lambda1_Am", "--values", "0.5,1,2,5", "--format", "csv", "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let values: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[2].parse().unwrap())
        .collect();
    assert_eq!(values.len(), 4);
    assert!(values.windows(2).all(|w| w[0] < w[1]), "{values:?}");
    assert!(dir.path().join("scan_lambda1_Am.csv").exists());
}

#[test]
fn unknown_scan_quantity_lists_names() {
    let out = modspace(&["scan", "--quantity", "entropy_rate"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("t1_norm") && err.contains("lambda1_Am"), "{err}");
}

#[test]
fn generate_writes_subspaces_and_packets() {
    let dir = tempfile::tempdir().unwrap();
    let out = modspace(&["generate", "--dims", "2,4", "--grid-n", "1024", "--out", path(dir.path())]);
    assert_eq!(code(&out), 0);
    for f in ["abstract_N2.json", "abstract_N4.json", "packets/index.csv", "packets/packet_00.csv"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let index = fs::read_to_string(dir.path().join("packets/index.csv")).unwrap();
    assert_eq!(index.lines().count(), 11);
}
