use std::path::Path;
use std::process::{Command, Output};

fn radial_ld(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radial-ld"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn simulate_writes_worldline_and_events() {
    let dir = tempfile::tempdir().unwrap();
    let out = radial_ld(&["simulate", "--q2", "1", "--r0", "10", "--v0", "0.1", "--out", "run"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).starts_with("outcome=TurnedAndEscaped"));

    let csv = std::fs::read_to_string(dir.path().join("run/worldline.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("tau,t,x,v,theta,A,Ac,Ebar"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 8);
    assert_eq!(first[2].parse::<f64>().unwrap(), -10.0);

    let events: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("run/events.json")).unwrap()).unwrap();
    let kinds: Vec<&str> = events.as_array().unwrap().iter().map(|e| e["kind"].as_str().unwrap()).collect();
    assert_eq!(&kinds[..3], ["Entry", "Turn", "Exit"]);
}

#[test]
fn simulate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        let out = radial_ld(&["simulate", "--r0", "2", "--v0", "0.5", "--out", name], dir.path());
        assert!(out.status.success());
    }
    let a = std::fs::read(dir.path().join("a/worldline.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/worldline.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["frobnicate"][..],
        &["simulate", "--r0", "10"],
        &["simulate", "--v0", "0.1"],
        &["simulate", "--r0", "10", "--v0", "1.5"],
        &["simulate", "--r0", "-1", "--v0", "0.1"],
        &["bounds", "theorem2", "--v0", "0.1"],
    ] {
        assert_eq!(radial_ld(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bounds_prints_table_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = radial_ld(&["bounds", "theorem1", "--r0", "2", "--r1", "0.5", "--out", "t1.csv"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("v0_max") && text.contains("4.47213595"));
    let csv = std::fs::read_to_string(dir.path().join("t1.csv")).unwrap();
    assert!(csv.starts_with("quantity,value\nv0_max,"));

    let out = radial_ld(&["bounds", "lemma2", "--v0", "0.6", "--k", "0.5"], dir.path());
    assert!(stdout(&out).contains("6.6666666666666"));
    let out = radial_ld(&["bounds", "lemma3", "--v0", "0.5", "--r0", "10", "--x", "-1"], dir.path());
    assert!(out.status.success());
    let out = radial_ld(&["bounds", "theorem2", "--v0", "0.1", "--r1", "1"], dir.path());
    assert!(stdout(&out).contains("r0_min"));
}

#[test]
fn sweep_rows_match_axis_product() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("spec.json"),
        r#"{"axes": {"v0": [0.05, 0.3], "r0": [2, 20]}, "fixed": {"Q2": 1, "r1": 0.5}, "output_dir": "out"}"#,
    )
    .unwrap();
    let out = radial_ld(&["sweep", "spec.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "v0,r0,Q2,r1,outcome,x_turn,tau_turn,t_turn,v_turn,runaway_rate,min_bound_slack,error"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.contains("TurnedAndEscaped")));

    // --out overrides the spec's directory; output is identical.
    assert!(radial_ld(&["sweep", "spec.json", "--out", "again"], dir.path()).status.success());
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("again/sweep.csv")).unwrap());
}

#[test]
fn zero_profile_sweep_never_turns() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("zero.txt"), "# r magnitude\n1 0\n100 0\n").unwrap();
    std::fs::write(
        dir.path().join("spec.json"),
        r#"{"axes": {"v0": [0.1, 0.2]}, "fixed": {"Q2": 1, "r1": 0.5}, "profile": "zero.txt"}"#,
    )
    .unwrap();
    let out = radial_ld(&["sweep", "spec.json", "--out", "z"], dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("z/sweep.csv")).unwrap();
    for row in csv.lines().skip(1) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[4], "HorizonCap");
        assert_eq!(cols[5], "");
    }
}

#[test]
fn bad_sweep_spec_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("spec.json"), r#"{"axes": {"v0": [0.1]}}"#).unwrap();
    assert_eq!(radial_ld(&["sweep", "spec.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn verify_quick_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = radial_ld(&["verify", "--quick", "--out", "v"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("v/verify.json")).unwrap()).unwrap();
    assert_eq!(report["summary"]["failures"], 0);
    assert_eq!(report["summary"]["cases"], report["cases"].as_array().unwrap().len());
}
