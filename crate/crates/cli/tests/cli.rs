use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qca-lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap_or(f64::NAN)).collect())
        .collect()
}

#[test]
fn verify_shipped_rule() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--model", "weyl3d+"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["pass"], true);
    assert!(report["unitarity"]["worst"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn verify_rejects_bad_mass_and_perturbation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["verify", "--model", "dirac", "--mass", "1.5"]);
    assert_eq!(code(&o), 2);
    let o = run(dir.path(), &["verify", "--model", "weyl1d", "--perturb", "0.01"]);
    assert_eq!(code(&o), 1);
    let o = run(dir.path(), &["verify", "--model", "nonsense"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn dispersion_exports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["dispersion", "--model", "weyl1d", "--grid", "101"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&dir.path().join("dispersion.csv"));
    assert_eq!(rows.len(), 101);
    for r in &rows {
        assert!(r[1] <= r[2]);
        for w in &r[1..] {
            assert!((w.abs() - r[0].abs()).abs() < 1e-10, "{r:?}");
        }
    }
    assert!(dir.path().join("dispersion.gp").exists());

    let o = run(
        dir.path(),
        &["dispersion", "--model", "dirac1d", "--mass", "1", "--grid", "21"],
    );
    assert_eq!(code(&o), 0);
    for r in csv_rows(&dir.path().join("dispersion.csv")) {
        for w in &r[1..] {
            assert!((w.abs() - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        }
    }

    let o = run(dir.path(), &["dispersion", "--model", "weyl1d", "--grid", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn evolve_weyl1d() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["evolve", "--model", "weyl1d", "--shape", "512", "--k0", "1.0", "--width", "0.05", "--steps", "60"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(text.starts_with("t,x1,norm,overlap,p_error,wrapped\n"));
    let rows = csv_rows(&dir.path().join("trajectory.csv"));
    let last = rows.last().unwrap();
    let first = &rows[0];
    let v = (last[1] - first[1]) / (last[0] - first[0]);
    assert!((v - 1.0).abs() < 1e-3, "{v}");
    for r in &rows {
        assert!((r[2] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn evolve_flags_wraparound() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["evolve", "--model", "weyl1d", "--shape", "64", "--k0", "1.0", "--width", "0.1", "--steps", "60"],
    );
    assert_eq!(code(&o), 1);
    let text = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(text.lines().any(|l| l.ends_with(",1")));
}

#[test]
fn maxwell_sweep_and_scan() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["maxwell", "--model", "weyl3d+", "--samples", "20"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("maxwell.json")).unwrap())
            .unwrap();
    assert!(report["residuals"]["worst_transversality"].as_f64().unwrap() <= 1e-12);
    let rows = csv_rows(&dir.path().join("deviation.csv"));
    let m1: Vec<f64> = rows.iter().filter(|r| r[1] == 1.0).map(|r| r[2]).collect();
    assert_eq!(m1.len(), 3);
    assert!(m1.windows(2).all(|w| w[1] < w[0]));

    let o = run(dir.path(), &["maxwell", "--sizes", "8", "--samples", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn units_fill_and_reject() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["units", "--a", "2", "--tau", "4", "--unit-mass", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("units.json")).unwrap())
            .unwrap();
    assert_eq!(v["c"], 0.5);
    assert_eq!(v["hbar"], 3.0);
    let o = run(dir.path(), &["units", "--a", "2"]);
    assert_eq!(code(&o), 2);
    let o = run(dir.path(), &["units", "--a", "2", "--tau", "4", "--c", "1", "--unit-mass", "3"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sample\nmodel = weyl1d\ngrid = 11\n").unwrap();
    let o = run(dir.path(), &["dispersion", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_rows(&dir.path().join("dispersion.csv")).len(), 11);
    let o = run(
        dir.path(),
        &["dispersion", "--config", cfg.to_str().unwrap(), "--grid", "5"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(csv_rows(&dir.path().join("dispersion.csv")).len(), 5);

    std::fs::write(&cfg, "unknown = 1\n").unwrap();
    let o = run(dir.path(), &["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn outputs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = run(
            dir.path(),
            &["verify", "--model", "weyl2d", "--seed", "9", "--samples", "50"],
        );
        assert_eq!(code(&o), 0);
        let o = run(dir.path(), &["maxwell", "--model", "weyl3d-", "--samples", "5", "--seed", "4"]);
        assert_eq!(code(&o), 0);
    }
    for f in ["verify.json", "maxwell.json", "deviation.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn thread_cap_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qca-lab"))
        .args(["verify", "--model", "weyl1d", "--out"])
        .arg(dir.path())
        .env("QCA_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_qca-lab"))
        .args(["verify", "--model", "weyl1d", "--out"])
        .arg(dir.path())
        .env("QCA_LAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}
