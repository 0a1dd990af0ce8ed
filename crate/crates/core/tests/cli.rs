use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_asymfix");

const PICARD: &str = r#"{"space":{"kind":"line_quarter"},"map":{"kind":"scale","factor":0.5},
"task":"picard","params":{"x0":[1.0]},"solver":{"tol":1e-10,"max_iter":10000,"record_trace":true},"seed":0}"#;

const AXIOMS: &str = r#"{"space":{"kind":"line_quarter"},"task":"axioms",
"params":{"sample":{"grid":{"lower":[-1.0],"upper":[1.0],"points_per_axis":21}}}}"#;

const DIVERGE: &str = r#"{"space":{"kind":"line_quarter"},"map":{"kind":"scale","factor":3.0},
"task":"picard","params":{"x0":[1.0]}}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn picard_run_writes_summary_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "halving.scenario.json", PICARD);
    let out = run(&["run", &path]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["task", "status", "point", "iterations", "forward_residual", "backward_residual", "bound_respected", "diagnostics"] {
        assert!(summary.get(key).is_some(), "missing {key}");
    }
    assert_eq!(summary["status"], "converged");
    assert!(summary["point"][0].as_f64().unwrap().abs() < 1e-9);
    assert!(summary["forward_residual"].as_f64().unwrap() <= 1e-10);
    assert!(summary["backward_residual"].as_f64().unwrap() <= 1e-10);

    let csv = fs::read_to_string(dir.path().join("halving.trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,x0,d_fwd_step,d_bwd_step,bound"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len() as u64, summary["iterations"].as_u64().unwrap());
    assert!(rows[0].starts_with("0,1.0000000000000000e0,"));
    assert!(rows[0].ends_with(','), "bound column should be empty: {}", rows[0]);
}

#[test]
fn axioms_run_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["run", &write(dir.path(), "ax.scenario.json", AXIOMS)]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["diagnostics"]["distance"]["violations"], serde_json::json!([]));
}

#[test]
fn malformed_and_unknown_fields_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["run", &write(dir.path(), "bad.scenario.json", "{\"space\": \n [")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line") && err.contains("column"), "{err}");

    let typo = PICARD.replace("\"params\"", "\"parms\"");
    let out = run(&["run", &write(dir.path(), "typo.scenario.json", &typo)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["run", "/definitely/not/here.json"]).status.code(), Some(2));
}

#[test]
fn suite_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.scenario.json", PICARD);
    write(dir.path(), "b.scenario.json", AXIOMS);
    write(dir.path(), "notes.json", "not a scenario");
    let out = run(&["suite", &dir.path().to_string_lossy()]);
    assert_eq!(out.status.code(), Some(0));
    let agg: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&String> = agg.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["a.scenario.json", "b.scenario.json"]);

    write(dir.path(), "c.scenario.json", DIVERGE);
    assert_eq!(run(&["suite", &dir.path().to_string_lossy()]).status.code(), Some(1));

    let empty = tempfile::tempdir().unwrap();
    assert_eq!(run(&["suite", &empty.path().to_string_lossy()]).status.code(), Some(2));
    assert_eq!(run(&["suite", "/definitely/not/here"]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    for e in fs::read_dir(corpus).unwrap() {
        let p = e.unwrap().path();
        if p.to_string_lossy().ends_with(".scenario.json") {
            fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
        }
    }
    let d = dir.path().to_string_lossy().into_owned();
    let a = run(&["suite", &d]);
    let b = run(&["suite", &d]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(1), "corpus includes negative verdicts");
}
