use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcocycle")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn disc_suite_passes() {
    for alpha in ["1", "0", "-1"] {
        let o = run(&["verify", "disc", "--alpha", alpha, "--q", "1/2", "--window", "64", "--seed", "7"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["verify", "disc", "--alpha", "2", "--q", "1/2"][..],
        &["verify", "disc", "--alpha", "1", "--q", "2"],
        &["verify", "su2-symbolic"],
        &["verify", "su2-symbolic", "--q", "0.5"],
        &["verify", "su2-gns", "--q", "1/2", "--z", "1"],
        &["verify", "su2-gns", "--q", "1/2", "--degree", "2"],
        &["eval", "tau-su2", "--tuple", "a,b"],
        &["eval", "tau-disc", "--alpha", "1", "--tuple", "E00,Q,E00"],
        &["report", "/nonexistent/report.json"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failing_checks_exit_with_one() {
    let o = run(&["verify", "disc", "--alpha", "1", "--window", "32", "--tolerance", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn symbolic_suite_reports_zero_error() {
    let o = run(&["verify", "su2-symbolic", "--q", "1/2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["check"], "verify su2-symbolic");
    assert!(v["cases"].as_array().unwrap().iter().all(|c| c["abs_err"] == 0.0));
}

#[test]
fn evaluations() {
    let o = run(&["eval", "tau-su2", "--q", "1/2", "--tuple", "a,b,c,d", "--verbose"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("lhs=3/1120 rhs=3/1120").count(), 2);
    let o = run(&["eval", "tau-su2", "--tuple", "1,a,b,c"]);
    assert!(stdout(&o).contains("tau = 0"));
    let o = run(&["eval", "tau-disc", "--alpha", "1", "--q", "1/2", "--tuple", "E00,E00,E00", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cases = v["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 2);
    for c in cases {
        let lhs: f64 = c["lhs"].as_str().unwrap().parse().unwrap();
        assert!((lhs + 4.0 / 3.0).abs() < 1e-14);
    }
}

#[test]
fn saved_reports_render_again() {
    let dir = std::env::temp_dir().join(format!("qcocycle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("disc.json");
    let p = path.to_str().unwrap();
    let o = run(&["verify", "disc", "--alpha", "0", "--window", "32", "--format", "json", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "verify disc PASS");
    let again = run(&["report", p, "--format", "json"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&again));
    let text = run(&["report", p]);
    assert!(stdout(&text).starts_with("verify disc [quantum disc] PASS"));
    std::fs::remove_dir_all(&dir).unwrap();
}
