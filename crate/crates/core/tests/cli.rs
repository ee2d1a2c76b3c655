use std::path::Path;
use std::process::{Command, Output};

fn openshop(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_openshop")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gen_solve_validate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = openshop(&["gen", "--family", "tight", "--a", "3", "--output", "t.json"], d);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(d.join("t.json")).unwrap(),
        r#"{"m":2,"n":3,"p":[[3,0,1],[0,3,1]],"q":[0,0,3]}"#
    );

    for (algo, extra, lmax) in [
        ("jackson", vec![], "7"),
        ("list", vec!["--priority", "2,0,1"], "7"),
        ("exact", vec![], "5"),
        ("ptas", vec!["--mode", "oracle-guided", "--diagnostics", "d.json"], "46/9"),
        ("ptas", vec!["--epsilon", "1", "--delta-override", "1", "--budget", "100000"], "5"),
    ] {
        let mut args = vec!["solve", "--algo", algo, "--input", "t.json", "--output", "s.json"];
        args.extend(extra);
        let out = openshop(&args, d);
        assert!(out.status.success(), "{algo}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout(&out).trim(), format!("lmax {lmax}"), "{algo}");
        let v = openshop(&["validate", "--instance", "t.json", "--schedule", "s.json"], d);
        assert!(v.status.success());
        assert_eq!(stdout(&v).trim(), format!("valid; lmax {lmax}"));
    }
    let diag: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("d.json")).unwrap()).unwrap();
    assert_eq!(diag["k"], 1);
    assert_eq!(diag["delta"], "1/36");
    assert_eq!(diag["grid_points"], 576);
    assert_eq!(diag["mode"], "oracle-guided");
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("t.json"), r#"{"m":2,"n":3,"p":[[3,0,1],[0,3,1]],"q":[0,0,3]}"#).unwrap();
    std::fs::write(
        d.join("s.json"),
        r#"{"ops":[{"machine":0,"job":0,"start":0,"end":3},{"machine":0,"job":2,"start":1,"end":2}]}"#,
    )
    .unwrap();
    let out = openshop(&["validate", "--instance", "t.json", "--schedule", "s.json"], d);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("machine-overlap"), "{text}");
    assert!(text.contains("missing-operation"), "{text}");
}

#[test]
fn bad_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.json"), r#"{"m":1,"n":1,"p":[[1]],"q":[-1]}"#).unwrap();
    let out = openshop(&["solve", "--algo", "jackson", "--input", "bad.json", "--output", "s.json"], d);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("q[0]"));
    let out = openshop(&["gen", "--family", "tight", "--a", "0"], d);
    assert!(!out.status.success());
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("cfg.json"),
        r#"{"instances":[{"family":"tight","a":2,"count":2}],"algorithms":["jackson","exact"],"out":"r.csv","record_time":false}"#,
    )
    .unwrap();
    let out = openshop(&["bench", "--config", "cfg.json"], d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        std::fs::read_to_string(d.join("r.csv")).unwrap(),
        "instance,algo,m,n,lmax,P,Q,lmax_star,ratio,ratio_float,wall_ms,status\n\
         tight-a2,jackson,2,3,5,3,4,4,5/4,1.250000,,ok\n\
         tight-a2,exact,2,3,4,3,4,4,1,1.000000,,proved-optimal\n\
         tight-a3,jackson,2,3,7,4,5,5,7/5,1.400000,,ok\n\
         tight-a3,exact,2,3,5,4,5,5,1,1.000000,,proved-optimal\n"
    );
    let out = openshop(&["bench", "--config", "cfg.json", "--out", "other.csv"], d);
    assert!(out.status.success());
    assert!(d.join("other.csv").exists());
}
