use std::path::Path;
use std::process::Command;

fn sfns() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sfns"))
}

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs"))
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().expect("binary runs").status.code().expect("exit code")
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let ok = code(sfns().args(["verify", "--family", "beltrami", "--lambda", "2", "--alpha", "1", "--beta", "0"]).args([
        "--points", "1000", "--seed", "7", "--tol", "1e-8", "--out",
    ]).arg(&out));
    assert_eq!(ok, 0);
    let reports: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let checks: Vec<&str> = reports.as_array().unwrap().iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert!(checks.contains(&"divergence") && checks.contains(&"navier_stokes"));
    assert!(dir.path().join("verify_config.json").exists());

    assert_eq!(code(sfns().args(["verify", "--family", "bump2d", "--Ra", "1.0", "--out"]).arg(&out)), 0);
    assert_eq!(code(sfns().args(["verify", "--family", "foo", "--out"]).arg(&out)), 2);
    // an impossible tolerance is a check failure, not a usage error
    assert_eq!(code(sfns().args(["verify", "--family", "beltrami", "--tol", "1e-30", "--out"]).arg(&out)), 1);
    assert_eq!(code(sfns().args(["verify", "--family", "poly22", "--coeffs", "f4=1,g2=1", "--out"]).arg(&out)), 2);
    assert_eq!(code(sfns().args(["frobnicate"])), 2);
}

#[test]
fn evolve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |kind: &str, cfg: &Path, out: &str| code(sfns().args(["evolve", kind, "--config"]).arg(cfg).arg("--out").arg(dir.path().join(out)));

    assert_eq!(run("hm2d", &configs().join("hm2d_gaussian.json"), "hm"), 0);
    let index: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("hm/index.json")).unwrap()).unwrap();
    assert!(index.to_string().contains("snap_00000_phi.sfns"));
    assert!(dir.path().join("hm/series.csv").exists());
    assert!(dir.path().join("hm/config.json").exists());

    let zero = dir.path().join("zero.json");
    std::fs::write(
        &zero,
        r#"{"grid": {"n": 16, "length": 6.283185307179586}, "solver": {"nu": 0.1, "dt": 0.1, "t_final": 0.5}, "initial": {"type": "zero"}}"#,
    )
    .unwrap();
    assert_eq!(run("ns3d", &zero, "zero"), 0);
    let csv = std::fs::read_to_string(dir.path().join("zero/series.csv")).unwrap();
    for line in csv.lines().skip(1) {
        assert!(line.split(',').skip(1).take(2).all(|v| v.parse::<f64>().unwrap() == 0.0), "{line}");
    }

    assert_eq!(run("ns3d", &configs().join("ns3d_too_large_dt.json"), "abort"), 3);
    assert!(dir.path().join("abort/snap_00000_u.sfns").exists());

    assert_eq!(run("heat", &configs().join("heat_gaussian.json"), "heat"), 0);
    assert_eq!(run("hm2d", &dir.path().join("missing.json"), "none"), 2);
}

#[test]
fn symmetry_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"rep": "rep22", "frames": "#).unwrap();
    assert_eq!(code(sfns().args(["symmetry", "--config"]).arg(&bad).arg("--out").arg(dir.path().join("bad"))), 2);

    // a short, coarse run: the exit code must agree with the written verdict
    let small = dir.path().join("small.json");
    std::fs::write(
        &small,
        r#"{"rep": "rep22", "frames": {"a": [1, 0, 0], "b": [0, 1, 0]},
            "phi0": {"family": "gaussian", "params": {"amplitude": 0.02, "width": 1.0}},
            "psi0": {"family": "polynomial", "params": {"terms": []}},
            "grid": {"n": 24, "length": 10.0},
            "solver": {"nu": 0.05, "dt": 0.02, "t_final": 0.1, "snapshot_every": 5}}"#,
    )
    .unwrap();
    let out = dir.path().join("small");
    let c = code(sfns().args(["symmetry", "--config"]).arg(&small).arg("--out").arg(&out));
    let verdict: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("verdict.json")).unwrap()).unwrap();
    let expected = if verdict["verdict"] == "inconclusive" { 4 } else { 0 };
    assert_eq!(c, expected, "{verdict}");
    for f in ["config.json", "prediction.json", "anisotropy.csv", "run/index.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}
