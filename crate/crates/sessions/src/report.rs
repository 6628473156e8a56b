//! Machine-readable run reports with stable field order and replayable
//! witness traces.

use serde::{Deserialize, Serialize};

use crate::calculus::Trace;
use crate::safety::{Violation, ViolationKind};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub input_digest: String,
    pub verdict: String,
    pub findings: Vec<Finding>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Finding {
    pub kind: String,
    pub indices: Vec<usize>,
    pub trace: Trace,
    pub detail: String,
}

/// Hex SHA-256 of the input file, tying a report to what was checked.
pub fn digest(input: &str) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(input.as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: &str, input: &str, verdict: &str) -> Self {
        Report {
            version: REPORT_VERSION,
            command: command.to_owned(),
            input_digest: digest(input),
            verdict: verdict.to_owned(),
            findings: Vec::new(),
        }
    }

    pub fn push_violation(&mut self, v: &Violation) {
        self.findings.push(Finding {
            kind: match v.kind {
                ViolationKind::AccessControl => "access-control".into(),
                ViolationKind::LeakFreedom => "leak-freedom".into(),
            },
            indices: v.indices.clone(),
            trace: v.trace.clone(),
            detail: v.explanation.clone(),
        });
    }

    pub fn push_finding(&mut self, kind: &str, detail: String) {
        self.findings.push(Finding {
            kind: kind.to_owned(),
            indices: Vec::new(),
            trace: Vec::new(),
            detail,
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
