use std::path::Path;
use std::process::{Command, Output};

fn ppoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppoly"))
        .args(args)
        .env_remove("PPOLY_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn unknown_suite_exits_2() {
    let o = ppoly(&["verify", "nonsense-suite"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown suite"), "{}", stderr(&o));
}

#[test]
fn invalid_config_exits_2() {
    let o = ppoly(&["verify", "msw", "--k-min", "13"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("even"));
    let o = ppoly(&["verify", "msw", "--pass-tol", "1e-2", "--fail-tol", "1e-3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn passing_suite_writes_artifacts_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ppoly(&["verify", "bernoulli-identities", "--k-max", "16", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("bits"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["verdict"], "pass");
    assert_eq!(json["config"]["k_max"], 16);
    assert!(Path::new(out).join("bernoulli-identities.json").exists());
    assert!(Path::new(out).join("bernoulli-identities.csv").exists());

    let r = ppoly(&["report", out]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains("bernoulli-identities"));
}

#[test]
fn reports_are_byte_reproducible() {
    let a = ppoly(&["verify", "msw", "--k-max", "20"]);
    let b = ppoly(&["verify", "msw", "--k-max", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failing_suite_exits_1() {
    // the literal minus-sign identity fails, the plus-sign one passes
    let o = ppoly(&["verify", "log-integral"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn zeros_as_csv() {
    let o = ppoly(&["zeros", "--family", "q", "--k", "12", "--m", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,k,m,re,im,modulus,deviation,residual"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.starts_with("q-m1,12,1,")));
}

#[test]
fn poly_and_lvalue() {
    let o = ppoly(&["poly", "--family", "ramanujan", "--k", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let p: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(p["weight"], 12);

    let o = ppoly(&["lvalue", "--k", "12", "--eisenstein", "--s", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let re: f64 = v["re"].as_str().unwrap().parse().unwrap();
    assert!((re + 1.0 / 3168.0).abs() < 1e-15, "{re}");

    let o = ppoly(&["poly", "--family", "q", "--k", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn forms_lists_certificates() {
    let o = ppoly(&["forms", "--k", "24", "--count", "3", "--precision-bits", "128"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["forms"].as_array().unwrap().len(), 2);
    let t2: f64 = v["forms"][0]["t2_residual"].as_str().unwrap().parse().unwrap();
    assert!(t2 < 1e-20);
}
