//! Declarative scenario runner behind the `asymfix` binary.
//!
//! A scenario is a strict JSON object
//! `{"space", "map"?, "task", "params"?, "solver"?, "seed"?}`; running it
//! yields a [`Summary`] and an exit code: 0 success, 1 negative verdict,
//! 2 input error.

mod json;
mod scenario;
mod tasks;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

pub use json::to_json;
pub use scenario::{GridSpec, Sample, Scenario, Space, Task};

use crate::exec::Execution;
use crate::spaces::Point;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const SCENARIO_SUFFIX: &str = ".scenario.json";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub task: Option<String>,
    pub status: String,
    pub point: Option<Point>,
    pub iterations: Option<usize>,
    #[serde(serialize_with = "opt_extended")]
    pub forward_residual: Option<f64>,
    #[serde(serialize_with = "opt_extended")]
    pub backward_residual: Option<f64>,
    pub bound_respected: Option<bool>,
    pub diagnostics: Value,
}

fn opt_extended<S: serde::Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => crate::numfmt::extended_f64(x, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub summary: Summary,
    /// Where the trace CSV was written, if one was.
    pub trace_path: Option<PathBuf>,
}

impl Outcome {
    fn input_error(task: Option<String>, message: String) -> Self {
        Outcome {
            exit_code: EXIT_INPUT,
            summary: Summary {
                task,
                status: "input_error".into(),
                point: None,
                iterations: None,
                forward_residual: None,
                backward_residual: None,
                bound_respected: None,
                diagnostics: json!({ "error": message }),
            },
            trace_path: None,
        }
    }
}

/// `dir/foo.scenario.json` -> `dir/foo.trace.csv`.
pub fn trace_path_for(path: &Path) -> PathBuf {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("scenario");
    let stem = name
        .strip_suffix(SCENARIO_SUFFIX)
        .or_else(|| name.strip_suffix(".json"))
        .unwrap_or(name);
    path.with_file_name(format!("{stem}.trace.csv"))
}

/// Runs a scenario given as text. A trace is written to `trace_out` when the
/// solver config asks for one and the task produces it.
pub fn run_scenario_str(text: &str, trace_out: Option<&Path>) -> Outcome {
    let sc: Scenario = match serde_json::from_str(text) {
        Ok(sc) => sc,
        Err(e) => return Outcome::input_error(None, format!("malformed scenario: {e}")),
    };
    let task = Some(sc.task.name().to_string());
    let out = match tasks::run_task(&sc) {
        Ok(out) => out,
        Err(e) => return Outcome::input_error(task, e.to_string()),
    };
    let mut trace_path = None;
    if let (Some((trace, dim)), Some(path)) = (&out.trace, trace_out) {
        if let Err(e) = fs::write(path, trace.to_csv(*dim)) {
            return Outcome::input_error(task, format!("cannot write {}: {e}", path.display()));
        }
        trace_path = Some(path.to_path_buf());
    }
    Outcome {
        exit_code: out.exit_code,
        summary: Summary {
            task,
            status: out.status,
            point: out.point,
            iterations: out.iterations,
            forward_residual: out.forward_residual,
            backward_residual: out.backward_residual,
            bound_respected: out.bound_respected,
            diagnostics: out.diagnostics,
        },
        trace_path,
    }
}

pub fn run_scenario(path: &Path) -> Outcome {
    match fs::read_to_string(path) {
        Ok(text) => run_scenario_str(&text, Some(&trace_path_for(path))),
        Err(e) => Outcome::input_error(None, format!("cannot read {}: {e}", path.display())),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub exit_code: i32,
    /// File name -> summary, in file-name order.
    pub summaries: BTreeMap<String, Summary>,
    pub error: Option<String>,
}

impl SuiteOutcome {
    pub fn to_json(&self) -> String {
        match &self.error {
            Some(e) => to_json(&json!({ "error": e })),
            None => to_json(&self.summaries),
        }
    }
}

pub fn run_suite(dir: &Path) -> SuiteOutcome {
    run_suite_with(Execution::default(), dir)
}

/// Runs every `*.scenario.json` in `dir`; the exit code is the largest of
/// the individual codes.
pub fn run_suite_with(exec: Execution, dir: &Path) -> SuiteOutcome {
    let fail = |e: String| SuiteOutcome {
        exit_code: EXIT_INPUT,
        summaries: BTreeMap::new(),
        error: Some(e),
    };
    let entries = match fs::read_dir(dir) {
        Ok(it) => it,
        Err(e) => return fail(format!("cannot read {}: {e}", dir.display())),
    };
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.ends_with(SCENARIO_SUFFIX))
        })
        .collect();
    if files.is_empty() {
        return fail(format!("no {SCENARIO_SUFFIX} files in {}", dir.display()));
    }
    files.sort();
    let outcomes = exec.map(&files, |p| run_scenario(p));
    let mut summaries = BTreeMap::new();
    let mut exit_code = EXIT_OK;
    for (path, out) in files.iter().zip(outcomes) {
        exit_code = exit_code.max(out.exit_code);
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        summaries.insert(name.to_string(), out.summary);
    }
    SuiteOutcome {
        exit_code,
        summaries,
        error: None,
    }
}
