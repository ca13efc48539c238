//! Machine- and human-readable command reports with deterministic output:
//! a block of text lines followed by one JSON line.

use std::collections::BTreeMap;

use serde::Serialize;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_GENERICITY: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Violation,
    Skipped,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub subject: String,
    pub message: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub findings: Vec<Finding>,
    pub notes: Vec<String>,
    /// Named divisor-style maps: `{"tau": {"e15": "1", ...}}`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub divisors: BTreeMap<String, BTreeMap<String, String>>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            status: Status::Pass,
            findings: Vec::new(),
            notes: Vec::new(),
            divisors: BTreeMap::new(),
        }
    }

    pub fn violation(&mut self, subject: &str, message: String, values: &[(&str, String)]) {
        self.status = Status::Fail;
        self.findings.push(Finding {
            severity: Severity::Violation,
            subject: subject.to_string(),
            message,
            values: values
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        });
    }

    pub fn skipped(&mut self, subject: &str, message: String) {
        self.findings.push(Finding {
            severity: Severity::Skipped,
            subject: subject.to_string(),
            message,
            values: BTreeMap::new(),
        });
    }

    pub fn info(&mut self, subject: &str, message: String, values: &[(&str, String)]) {
        self.findings.push(Finding {
            severity: Severity::Info,
            subject: subject.to_string(),
            message,
            values: values
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        });
    }

    pub fn note(&mut self, note: String) {
        self.notes.push(note);
    }

    /// Human-readable lines followed by one machine-readable JSON line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        out.push_str(&format!("skeltrop {}: {status}\n", self.command));
        for f in &self.findings {
            let sev = match f.severity {
                Severity::Violation => "violation",
                Severity::Skipped => "skipped",
                Severity::Info => "info",
            };
            out.push_str(&format!("  [{sev}] {}: {}", f.subject, f.message));
            if !f.values.is_empty() {
                let vals: Vec<String> = f.values.iter().map(|(k, v)| format!("{k}={v}")).collect();
                out.push_str(&format!(" ({})", vals.join(", ")));
            }
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out.push_str(&serde_json::to_string(self).expect("report serializes"));
        out.push('\n');
        out
    }
}
