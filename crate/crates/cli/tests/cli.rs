use std::path::PathBuf;
use std::process::{Command, Output};

fn gapbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gapbound-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn sample() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/k5_sample.txt")
}

#[test]
fn family_three_succeeds_with_report_and_certificates() {
    let dir = scratch("k3");
    let o = gapbound(&["run-family", "--k", "3", "--alpha", "4/3", "--max-iter", "10", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("k=3 ancestors=1 max bound=4/3 max additional iterations=0 failures=0"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("family_k3.json")).unwrap()).unwrap();
    assert_eq!(report["max_bound"], "4/3");
    let cert = dir.join("certificates/k3_0.json");
    let v = gapbound(&["verify-cert", cert.to_str().unwrap()]);
    assert!(v.status.success(), "{}", stdout(&v));
}

#[test]
fn unreachable_alpha_fails() {
    let o = gapbound(&["run-family", "--k", "3", "--alpha", "1", "--max-iter", "1"]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains("failures=1"));
}

#[test]
fn larger_families_need_source_data() {
    for k in ["5", "6"] {
        let o = gapbound(&["run-family", "--k", k]);
        assert!(!o.status.success());
        assert!(stdout(&o).contains("source data absent"));
        let o = gapbound(&["ancestors", "--k", k]);
        assert!(stdout(&o).contains("source data absent"));
    }
}

#[test]
fn supplied_file_runs_and_reports() {
    let o = gapbound(&["ancestors", "--k", "5", sample().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("v 10 15").count(), 11);
    let o = gapbound(&["run-family", "--k", "5", sample().to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("k=5 ancestors=11"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = scratch("tamper");
    let o = gapbound(&["run-family", "--k", "3", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let path = dir.join("certificates/k3_0.json");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("\"bound\": \"4/3\"", "\"bound\": \"5/4\"", 1)).unwrap();
    let v = gapbound(&["verify-cert", path.to_str().unwrap()]);
    assert!(!v.status.success());
    assert!(stdout(&v).contains("REJECTED"));
}

#[test]
fn check_vertex_and_survey() {
    let o = gapbound(&["check-vertex", sample().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("vertex=true").count(), 11);
    let o = gapbound(&["survey", "--n", "6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("10/9"));
}

#[test]
fn malformed_file_reports_line() {
    let dir = scratch("bad");
    let path = dir.join("bad.txt");
    std::fs::write(&path, "v 3 3\n0 1 1\n1 2 3/2\n0 2 1\n").unwrap();
    let o = gapbound(&["gb", path.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}
