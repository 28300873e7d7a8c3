use std::path::Path;
use std::process::{Command, Output};

fn irrtorus(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrtorus"))
        .args(args)
        .current_dir(dir)
        .env_remove("IRRTORUS_WORKERS")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn empty_config_exits_zero_with_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.toml", "seed = 3\n");
    let out = irrtorus(&["run", &cfg, "--out-dir", "out"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["master_seed"], 3);
    assert_eq!(manifest["experiments"].as_array().unwrap().len(), 0);
}

#[test]
fn hypothesis_guard_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "[[experiment]]\nkind = \"linear-3d\"\np = 5.0\n");
    let out = irrtorus(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("experiment[0].p") && err.contains("p > 16/3"), "{err}");
}

#[test]
fn failed_assertion_exits_one_naming_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "strict.toml",
        "[[experiment]]\nkind = \"weyl\"\nname = \"strict\"\nscales = [8, 16, 32]\ntolerance = -1.0\n",
    );
    let out = irrtorus(&["run", &cfg, "--out-dir", "o", "--workers", "2"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strict.json"));
    let csv = std::fs::read_to_string(dir.path().join("o/strict.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "experiment,d,alphas,family,seed,N1,N2,N3,M,p,q,eps,lhs,rhs_model,ratio,n_t_used,grid_used"
    );
}

#[test]
fn export_plots_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "w.toml", "[[experiment]]\nkind = \"weyl\"\nname = \"w\"\nscales = [4, 8, 16, 32, 64]\n");
    assert_eq!(irrtorus(&["run", &cfg, "--out-dir", "o"], dir.path()).status.code(), Some(0));
    let out = irrtorus(&["export-plots", "o/w.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/w.json")).unwrap()).unwrap();
    let table = std::fs::read_to_string(dir.path().join("o/w.plot.csv")).unwrap();
    let fit = std::fs::read_to_string(dir.path().join("o/w.fit.csv")).unwrap();
    let coeffs: Vec<f64> = fit.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((coeffs[0] - report["slope"].as_f64().unwrap()).abs() < 1e-12);
    assert!((coeffs[1] - report["intercept"].as_f64().unwrap()).abs() < 1e-12);
    let rows: Vec<Vec<f64>> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert!((r[2] - (coeffs[1] + coeffs[0] * r[0])).abs() < 1e-12);
    }
    assert_eq!(irrtorus(&["export-plots", "o/missing.json"], dir.path()).status.code(), Some(2));
}
