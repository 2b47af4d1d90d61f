use std::path::Path;
use std::process::{Command, Output};

fn cvswap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvswap"))
        .arg("--out")
        .arg(dir)
        .args(args)
        .output()
        .expect("spawn cvswap")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn column(csv: &str, name: &str) -> Vec<(f64, f64)> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name} in {header:?}"));
    lines
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            (cells[0].parse().unwrap(), cells[k].parse().unwrap())
        })
        .collect()
}

#[test]
fn fidelity_and_optimize_emit_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = cvswap(dir.path(), &["--set", "input=TB", "--set", "resource=TB", "--set", "r12=0.5", "--set", "r34=1.0", "fidelity"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let f = v["fidelity"].as_f64().unwrap();
    assert!(f > 0.0 && f < 1.0);

    let o = cvswap(dir.path(), &["--set", "input=TB", "--set", "resource=TB", "--set", "r12=0.5", "--set", "r34=1.0", "optimize"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["report"]["best_fidelity"].as_f64().unwrap() >= f - 1e-12);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&cvswap(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&cvswap(dir.path(), &["--set", "nonsense=1", "fidelity"])), 2);
    assert_eq!(code(&cvswap(dir.path(), &["--set", "r12=-1", "fidelity"])), 2);
    assert_eq!(code(&cvswap(dir.path(), &["figure", "fig9"])), 2);
    assert_eq!(code(&cvswap(dir.path(), &["--tol", "0.5", "validate"])), 2);
    let empty = cvswap(dir.path(), &["--set", "start=1", "--set", "stop=0", "sweep"]);
    assert_eq!(code(&empty), 2, "{}", String::from_utf8_lossy(&empty.stderr));
}

#[test]
fn validate_passes_and_catches_the_phase_mutation() {
    let dir = tempfile::tempdir().unwrap();
    let ok = cvswap(dir.path(), &["validate"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("validate_report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);

    let bad = cvswap(dir.path(), &["validate", "--mutate-displacement-phase"]);
    assert_eq!(code(&bad), 1);
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL"));
}

#[test]
fn near_epr_resource_sweep_tracks_direct_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tb.cfg");
    std::fs::write(
        &cfg,
        "# TB input through a nearly ideal resource\ninput = TB\nresource = TB\nr34 = 8\naxis = r12\nstart = 0\nstop = 2\nstep = 0.1\noutput = tb.csv\n",
    )
    .unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let o = Command::new(env!("CARGO_BIN_EXE_cvswap"))
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .arg("sweep")
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(out.join("tb.manifest.json").exists());
        std::fs::read_to_string(out.join("tb.csv")).unwrap()
    };
    let first = run("a");
    let rows = column(&first, "F_TBswTB");
    assert_eq!(rows.len(), 21);
    for (r, f) in rows {
        let expect = 1.0 / (1.0 + (-2.0 * r).exp());
        assert!((f - expect).abs() <= 1e-3, "r12 {r}: {f} vs {expect}");
    }
    assert_eq!(first, run("b"));
}
