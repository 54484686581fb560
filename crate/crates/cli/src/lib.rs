//! Scenario runner for the ultragram toolkit.
//!
//! A scenario is a JSON document naming an ambient field, a base subfield,
//! a precision and a list of elements and tasks. [`run`] executes every task
//! and [`verify`] independently rechecks the witnesses in a report.

pub mod builtins;
pub mod codec;
pub mod context;
pub mod runner;
pub mod scenario;
pub mod verify;

use serde_json::{json, Value};
use thiserror::Error;

use ultragram_core::{FieldError, GroupError, SeriesError, SpaceError};

pub use runner::{run, Report, TaskReport};
pub use scenario::{parse_scenario, Scenario};
pub use verify::{verify, Check};

pub const SCHEMA: &str = "ultragram/1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("report: {0}")]
    Report(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl CliError {
    /// Process exit code: 1 for malformed or invalid input, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::UnknownName(_)
            | CliError::Unsupported(_)
            | CliError::Io { .. } => 1,
            _ => 2,
        }
    }
}

impl Report {
    /// Deterministic JSON form; keys are sorted and timing is left out.
    pub fn structured(&self) -> Value {
        let tasks: Vec<Value> = self
            .tasks
            .iter()
            .map(|t| {
                json!({
                    "index": t.index,
                    "op": t.op,
                    "label": t.label,
                    "summary": t.summary,
                    "outcome": t.outcome,
                })
            })
            .collect();
        json!({
            "schema": SCHEMA,
            "scenario": self.scenario,
            "ambient": self.header["ambient"],
            "base_field": self.header["base_field"],
            "precision": self.header["precision"],
            "tasks": tasks,
        })
    }

    pub fn text(&self) -> String {
        let p = &self.header["precision"];
        let ceiling: Vec<&str> = p["ceiling"]
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(Value::as_str)
            .collect();
        let mut out = format!(
            "scenario {} over {} / {}, base {}\nprecision: ceiling ({}), max_terms {}, degree_cap {}\n",
            self.scenario,
            self.header["ambient"]["group"].as_str().unwrap_or("?"),
            self.header["ambient"]["field"].as_str().unwrap_or("?"),
            self.header["base_field"].as_str().unwrap_or("?"),
            ceiling.join(", "),
            p["max_terms"],
            p["degree_cap"],
        );
        for t in &self.tasks {
            let label = t
                .label
                .as_deref()
                .map(|l| format!(" {l}"))
                .unwrap_or_default();
            out.push_str(&format!("[{}] {}{}: {}\n", t.index, t.op, label, t.summary));
        }
        out.push_str(&format!("elapsed {:.3}s\n", self.elapsed.as_secs_f64()));
        out
    }
}
