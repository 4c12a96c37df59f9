use std::process::Command;

fn kvirial(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_kvirial"))
        .args(args)
        .output()
        .expect("run kvirial");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into(),
        String::from_utf8_lossy(&out.stderr).into(),
    )
}

#[test]
fn model_flag_fills_missing_model() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("vp.json");
    std::fs::write(&cfg, r#"{"ansatz":{"c":1,"k":1,"e0":-1},"central":1}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let (code, _, err) = kvirial(&["build", "--config", cfg]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("no model"));
    let (code, out, _) = kvirial(&["build", "--model", "vp", "--config", cfg]);
    assert_eq!(code, 0);
    let line: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(line.len(), 11);
    assert!(
        line[2].parse::<f64>().unwrap() < 0.0,
        "H of a Newtonian star is negative"
    );
}

#[test]
fn output_path_and_format_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ev.json");
    std::fs::write(
        &cfg,
        r#"{"model":"ev","ansatz":{"c":1,"k":1,"e0":0.9,"l":0.5,"f0":1},"central":-0.3,"output":{"format":"csv"}}"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let (code, stdout, err) = kvirial(&[
        "check",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout
        .lines()
        .any(|l| l.starts_with("PASS") && l.contains("shell R1")));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(v["single"]["row"]["R1"].as_f64().unwrap() > 0.0);
    assert_eq!(v["single"]["report"]["model"], "ev");
}

#[test]
fn scan_verb_needs_scan_section() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("nv.json");
    std::fs::write(&cfg, r#"{"model":"nv","ansatz":{"c":1,"k":1,"e0":0.9}}"#).unwrap();
    let (code, _, err) = kvirial(&["scan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("no scan section"));
}
