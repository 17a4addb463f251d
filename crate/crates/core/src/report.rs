//! Machine-readable verification records.
//!
//! Every executed check emits exactly one record; runs serialize as
//! line-delimited JSON with a stable key order and records sorted by
//! suite, case, then params, so identical runs produce identical bytes
//! and diffs between runs are meaningful. Durations are reported as 0 by
//! default for exactly that reason — wall-clock noise would break
//! byte-for-byte determinism.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// One check's outcome. Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub suite: String,
    pub case: String,
    pub params: String,
    pub status: Status,
    pub counterexample: Option<String>,
    pub duration_ms: u64,
}

impl ReportRecord {
    pub fn pass(suite: &str, case: &str, params: impl Into<String>) -> Self {
        ReportRecord {
            suite: suite.into(),
            case: case.into(),
            params: params.into(),
            status: Status::Pass,
            counterexample: None,
            duration_ms: 0,
        }
    }

    /// Failures always carry their counterexample.
    pub fn fail(
        suite: &str,
        case: &str,
        params: impl Into<String>,
        counterexample: impl Into<String>,
    ) -> Self {
        ReportRecord {
            suite: suite.into(),
            case: case.into(),
            params: params.into(),
            status: Status::Fail,
            counterexample: Some(counterexample.into()),
            duration_ms: 0,
        }
    }

    /// Evidence and open-question records; the payload (if any) rides the
    /// counterexample slot.
    pub fn inconclusive(
        suite: &str,
        case: &str,
        params: impl Into<String>,
        evidence: Option<String>,
    ) -> Self {
        ReportRecord {
            suite: suite.into(),
            case: case.into(),
            params: params.into(),
            status: Status::Inconclusive,
            counterexample: evidence,
            duration_ms: 0,
        }
    }
}

/// Canonical report order: suite, case, params.
pub fn sort_records(records: &mut [ReportRecord]) {
    records.sort_by(|a, b| {
        (&a.suite, &a.case, &a.params).cmp(&(&b.suite, &b.case, &b.params))
    });
}

/// One JSON object per line, in the order given.
pub fn to_jsonl(records: &[ReportRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("records serialize"));
        out.push('\n');
    }
    out
}

/// Parse a report back; inverse of [`to_jsonl`].
pub fn from_jsonl(text: &str) -> Result<Vec<ReportRecord>, serde_json::Error> {
    text.lines()
        .filter(|line| !line.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

pub fn has_failures(records: &[ReportRecord]) -> bool {
    records.iter().any(|r| r.status == Status::Fail)
}
