//! Check reports: every verifier returns the full list of comparisons it
//! made, never short-circuiting, so failures are completely enumerated.

use serde::{Deserialize, Serialize};

/// One comparison. `ok` always means `lhs >= rhs`; checks stated as upper
/// bounds are recorded with their operands swapped into this form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub a: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    pub lhs: i64,
    pub rhs: i64,
    pub ok: bool,
    /// Distinguishes row families within one report (e.g. the two
    /// filtered inequalities, or rank vs. signature rows).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureAt {
    pub a: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub kind: String,
    pub rows: Vec<CheckRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<FailureAt>,
}

impl CheckReport {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            passed: true,
            kind: kind.into(),
            rows: Vec::new(),
            first_failure: None,
        }
    }

    pub fn push(&mut self, row: CheckRow) {
        if !row.ok {
            self.passed = false;
            if self.first_failure.is_none() {
                self.first_failure = Some(FailureAt { a: row.a, q: row.q });
            }
        }
        self.rows.push(row);
    }

    pub fn push_ge(&mut self, a: i64, q: Option<i64>, lhs: i64, rhs: i64, side: Option<&str>) {
        self.push(CheckRow {
            a,
            q,
            lhs,
            rhs,
            ok: lhs >= rhs,
            side: side.map(str::to_string),
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.ok)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}
