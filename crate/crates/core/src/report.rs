//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub parameters: Value,
    pub status: Status,
    /// `"0"` on pass, otherwise the first offending element.
    pub defect: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckRecord {
    pub fn pass(name: impl Into<String>, parameters: Value) -> Self {
        CheckRecord {
            name: name.into(),
            parameters,
            status: Status::Pass,
            defect: Value::String("0".into()),
            notes: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, parameters: Value, defect: Value) -> Self {
        CheckRecord {
            name: name.into(),
            parameters,
            status: Status::Fail,
            defect,
            notes: Vec::new(),
        }
    }

    pub fn from_bool(name: impl Into<String>, parameters: Value, ok: bool, defect: Value) -> Self {
        if ok {
            Self::pass(name, parameters)
        } else {
            Self::fail(name, parameters, defect)
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl Report {
    /// Records are sorted by name, then by their parameters, so the output
    /// does not depend on evaluation order.
    pub fn new(command: impl Into<String>, config: Value, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| {
            (&a.name, a.parameters.to_string()).cmp(&(&b.name, b.parameters.to_string()))
        });
        let mut summary = Summary::default();
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        Report {
            tool: "threepoint".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            checks,
            summary,
            wall_time_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sorted_and_counted() {
        let r = Report::new(
            "x",
            json!({}),
            vec![
                CheckRecord::fail("b", json!({"n": 1}), json!("y1")),
                CheckRecord::pass("a", json!({"n": 2})),
                CheckRecord::pass("a", json!({"n": 1})),
            ],
        );
        let names: Vec<_> = r.checks.iter().map(|c| (c.name.as_str(), c.parameters["n"].as_i64())).collect();
        assert_eq!(names, vec![("a", Some(1)), ("a", Some(2)), ("b", Some(1))]);
        assert_eq!(r.summary, Summary { pass: 2, fail: 1, skipped: 0 });
        assert!(!r.passed());
        assert!(!r.to_json().contains("wall_time_ms"));
    }
}
