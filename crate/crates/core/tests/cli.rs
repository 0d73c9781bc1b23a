use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_coherence-lab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn quantify_inline_spec() {
    let o = run(&["quantify", r#"{"variant": "QubitBloch", "s": [1, 0, 0]}"#]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["c_h"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["s_h"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn quantify_fock_state_from_file_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"variant": "SGPhase", "xi": 0.5}"#).unwrap();
    let out = dir.path().join("report.json");
    let o = run(&[
        "quantify",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!((v["c_h"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((v["nc_h"].as_f64().unwrap() - 4.0).abs() < 1e-3);
}

#[test]
fn quantify_csv_has_one_row() {
    let o = run(&["quantify", "--format", "csv", r#"{"variant": "RotatedNumber", "n": 2, "m": 2}"#]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2);
    assert!(data[0].starts_with("dim,reference,c_h,"));
    assert!(data[1].ends_with(",true,"));
}

#[test]
fn figure_csv_is_byte_stable() {
    let args = ["figure", "fig5", "--set", "R=1", "--set", "r=0:0.4:0.2"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# family: fig5\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn figure_json_parses() {
    let o = run(&["figure", "fig3", "--set", "nt=6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn counterexample_reports_violation() {
    let o = run(&["counterexample", "--bloch", "0.5,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["violation"].as_f64().unwrap() - 0.0740).abs() < 1e-3);
    assert_eq!(v["root_normalization"], "consistent");
}

#[test]
fn verify_small_run_passes_and_naive_branch_fails() {
    let o = run(&["verify", "--suite", "pythagoras", "--trials", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("summary: 5/5 properties passed"));
    let o = run(&["verify", "--suite", "pythagoras", "--trials", "20", "--naive-branch"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["figure", "fig9"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["quantify", "{not json"]).status.code(), Some(1));
    assert_eq!(
        run(&["quantify", r#"{"variant": "QubitBloch", "s": [1, 1, 0]}"#]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["quantify", "--trunc-dim", "4", r#"{"variant": "SqueezedCoherent", "R": 3, "r": 0.2}"#])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(BIN)
        .args(["figure", "fig3", "--set", "nt=4"])
        .env("COHERENCE_LAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(BIN)
        .args(["figure", "fig3", "--set", "nt=4"])
        .env("COHERENCE_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
