//! Check results and their JSON/text serialization.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::Format;

pub const SCHEMA: &str = "dqrr-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Value table on success, counterexample on failure, reason on skip.
    pub witness: Value,
}

impl Check {
    pub fn pass(name: impl Into<String>, witness: Value) -> Self {
        Check { name: name.into(), status: Status::Pass, witness }
    }

    pub fn fail(name: impl Into<String>, witness: Value) -> Self {
        Check { name: name.into(), status: Status::Fail, witness }
    }

    pub fn skip(name: impl Into<String>, reason: &str) -> Self {
        Check { name: name.into(), status: Status::Skip, witness: Value::String(reason.to_string()) }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, witness: Value) -> Self {
        if ok {
            Self::pass(name, witness)
        } else {
            Self::fail(name, witness)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub suite: String,
    pub params: Value,
    /// Sorted by name.
    pub checks: Vec<Check>,
    /// Seconds per suite; present only when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Value>,
}

impl Report {
    pub fn new(suite: &str, params: Value, mut checks: Vec<Check>, timing: Option<Value>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Report { schema: SCHEMA.to_string(), suite: suite.to_string(), params, checks, timing }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Serialize a report. Text output has exactly one line per check.
pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skip => "SKIP",
                };
                s.push_str(&format!("{tag} {} {}\n", c.name, c.witness));
            }
            s
        }
    }
}
