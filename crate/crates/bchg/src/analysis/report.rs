//! Check reports and their CSV / JSON serialisation.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bumped whenever a field of [`Summary`], [`CheckReport`] or [`SampleRow`] changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Witnesses kept per report.
const MAX_WITNESSES: usize = 5;

/// One tested inequality `lhs ≤ rhs` at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub check: String,
    pub id: usize,
    pub hypothesis: String,
    pub params: String,
    pub claim: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`; negative means the inequality failed.
    pub margin: f64,
    /// `(lhs − rhs) / scale`, compared against the report tolerance.
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub check_name: String,
    pub hypothesis_set: String,
    pub samples_tried: usize,
    /// Samples where an engine returned an error; these count as failures.
    pub engine_errors: usize,
    pub worst_violation: f64,
    pub tolerance: f64,
    pub witnesses: Vec<String>,
    pub passed: bool,
    pub note: String,
    #[serde(skip)]
    pub rows: Vec<SampleRow>,
}

impl CheckReport {
    /// Builds the report from its rows; `errors` holds the parameters and messages of failed evaluations.
    pub fn from_rows(
        check_name: &str,
        hypothesis_set: &str,
        samples_tried: usize,
        tolerance: f64,
        rows: Vec<SampleRow>,
        errors: Vec<String>,
        note: &str,
    ) -> Self {
        let worst = rows.iter().map(|r| r.violation).fold(f64::NEG_INFINITY, f64::max);
        let worst = if rows.is_empty() { 0.0 } else { worst };
        let mut failing: Vec<&SampleRow> = rows.iter().filter(|r| !(r.violation <= tolerance)).collect();
        failing.sort_by(|a, b| b.violation.total_cmp(&a.violation));
        let mut witnesses: Vec<String> = failing
            .iter()
            .take(MAX_WITNESSES)
            .map(|r| format!("#{} {} [{}] violation {:e}", r.id, r.params, r.claim, r.violation))
            .collect();
        witnesses.extend(errors.iter().take(MAX_WITNESSES).cloned());
        CheckReport {
            check_name: check_name.to_string(),
            hypothesis_set: hypothesis_set.to_string(),
            samples_tried,
            engine_errors: errors.len(),
            worst_violation: worst,
            tolerance,
            witnesses,
            passed: worst <= tolerance && errors.is_empty(),
            note: note.to_string(),
            rows,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

impl Summary {
    pub fn new(suite: &str, seed: u64, samples: usize, checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Summary { schema_version: SCHEMA_VERSION, suite: suite.to_string(), seed, samples, passed, checks }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invalid(e.to_string())).map(|s| s + "\n")
    }

    /// One row per tested inequality, in check order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
        for c in &self.checks {
            for r in &c.rows {
                w.serialize(r).map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::Invalid(format!("csv: {e}")))
    }

    /// A fixed-width text table, one line per check.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{:<4} {:<50} n={:<4} worst={:>11.3e} tol={:<6.0e} errors={} [{}]\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.check_name,
                c.samples_tried,
                c.worst_violation,
                c.tolerance,
                c.engine_errors,
                c.hypothesis_set,
            ));
        }
        s
    }
}
