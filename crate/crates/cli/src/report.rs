//! Report records written by every command. Field names are part of the
//! file format; bump `SCHEMA_VERSION` when one changes meaning.

use std::fs;
use std::path::Path;

use gruss_core::transforms::BoundReport;
use gruss_core::FuzzReport;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SINGULAR_STATUS: &str = "skipped: singular kernel";

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Verdicts, checks, grid rows or replays that produced a pass/fail outcome.
    pub evaluated: u64,
    pub failures: u64,
    /// Grid rows marked "skipped: singular kernel"; never counted as pass or fail.
    pub skipped: u64,
    pub passed: bool,
}

impl Summary {
    pub fn new(evaluated: u64, failures: u64, skipped: u64) -> Self {
        Summary {
            evaluated,
            failures,
            skipped,
            passed: failures == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub tool_version: String,
    pub started: String,
    pub finished: String,
    pub summary: Summary,
}

/// A deterministic check that is not a random campaign (closed forms, grids).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub points: u64,
    pub failures: u64,
    pub skipped: u64,
    /// Largest observed error in the check's own units.
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// One (n, m, omega, tuple) grid point of a transform report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub n: usize,
    pub m: usize,
    pub omega: Option<f64>,
    pub tuple: String,
    pub chain: BoundReport,
    /// Absent at singular kernel points.
    pub surrogate: Option<BoundReport>,
    pub coefficient: Option<String>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayRecord {
    pub inequality_id: String,
    pub trial: u64,
    pub recorded_slack: f64,
    pub replayed_slack: f64,
    pub reproduced: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VerdictEntry {
    Fuzz(FuzzReport),
    Check(CheckRecord),
    Bound(BoundRecord),
    Replay(ReplayRecord),
}

impl VerdictEntry {
    pub fn passed(&self) -> bool {
        match self {
            VerdictEntry::Fuzz(r) => r.failures == 0,
            VerdictEntry::Check(c) => c.passed,
            VerdictEntry::Bound(b) => b.status != "fail",
            VerdictEntry::Replay(r) => r.reproduced && r.holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub manifest: RunManifest,
    pub verdicts: Vec<VerdictEntry>,
}

impl RunReport {
    pub fn fuzz_reports(&self) -> impl Iterator<Item = &FuzzReport> {
        self.verdicts.iter().filter_map(|v| match v {
            VerdictEntry::Fuzz(r) => Some(r),
            _ => None,
        })
    }

    pub fn write_json(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).map_err(CliError::runtime)?;
        fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
    }
}

/// Load a run report, or a bare fuzz report, for replay.
pub fn load_fuzz_reports(path: &Path) -> CliResult<Vec<FuzzReport>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: not JSON: {e}", path.display())))?;
    if value.get("manifest").is_some() {
        let report: RunReport = serde_json::from_value(value)
            .map_err(|e| CliError::Usage(format!("{}: not a run report: {e}", path.display())))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "{}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
                path.display(),
                report.schema_version
            )));
        }
        Ok(report.fuzz_reports().cloned().collect())
    } else {
        let report: FuzzReport = serde_json::from_value(value)
            .map_err(|e| CliError::Usage(format!("{}: not a fuzz report: {e}", path.display())))?;
        Ok(vec![report])
    }
}

/// One CSV line of a transform report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformRow {
    pub inequality_id: String,
    pub n: usize,
    pub m: usize,
    pub omega: Option<f64>,
    pub tightness: Option<f64>,
    pub loewner_holds: Option<bool>,
    pub tuple: String,
    pub coefficient: Option<String>,
    pub lhs_norm: Option<f64>,
    pub status: String,
}

impl TransformRow {
    fn from_bound(rec: &BoundRecord, b: &BoundReport, coefficient: Option<String>) -> Self {
        TransformRow {
            inequality_id: b.inequality_id.clone(),
            n: rec.n,
            m: rec.m,
            omega: rec.omega,
            tightness: b.tightness,
            loewner_holds: Some(b.loewner_holds),
            tuple: rec.tuple.clone(),
            coefficient,
            lhs_norm: Some(lhs_norm(b)),
            status: if b.loewner_holds { "ok" } else { "fail" }.to_string(),
        }
    }

    /// Chain row first, then the surrogate row (or its skip marker).
    pub fn from_record(rec: &BoundRecord, surrogate_id: &str) -> Vec<Self> {
        let mut rows = vec![Self::from_bound(rec, &rec.chain, None)];
        match &rec.surrogate {
            Some(s) => rows.push(Self::from_bound(rec, s, rec.coefficient.clone())),
            None => rows.push(TransformRow {
                inequality_id: surrogate_id.to_string(),
                n: rec.n,
                m: rec.m,
                omega: rec.omega,
                tightness: None,
                loewner_holds: None,
                tuple: rec.tuple.clone(),
                coefficient: None,
                lhs_norm: None,
                status: SINGULAR_STATUS.to_string(),
            }),
        }
        rows
    }
}

/// `||Delta||`, from the top eigenvalue of `|Delta|^2`.
pub fn lhs_norm(b: &BoundReport) -> f64 {
    b.true_error_sq.operator_norm().sqrt()
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(CliError::runtime)?;
    for row in rows {
        w.serialize(row).map_err(CliError::runtime)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Per-inequality line of a verify/fuzz CSV report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    pub min_slack: Option<f64>,
    pub max_error: Option<f64>,
    pub seed: u64,
    pub status: String,
}

impl SummaryRow {
    pub fn from_entry(entry: &VerdictEntry, seed: u64) -> Option<Self> {
        let status = if entry.passed() { "ok" } else { "fail" }.to_string();
        Some(match entry {
            VerdictEntry::Fuzz(r) => SummaryRow {
                name: r.inequality_id.to_string(),
                trials: r.trials,
                failures: r.failures,
                min_slack: Some(r.min_slack),
                max_error: None,
                seed,
                status,
            },
            VerdictEntry::Check(c) => SummaryRow {
                name: c.name.clone(),
                trials: c.points,
                failures: c.failures,
                min_slack: None,
                max_error: Some(c.max_error),
                seed,
                status,
            },
            VerdictEntry::Replay(r) => SummaryRow {
                name: format!("replay:{}", r.inequality_id),
                trials: 1,
                failures: u64::from(!(r.reproduced && r.holds)),
                min_slack: Some(r.replayed_slack),
                max_error: Some((r.replayed_slack - r.recorded_slack).abs()),
                seed,
                status,
            },
            VerdictEntry::Bound(_) => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_passes_only_without_failures() {
        assert!(Summary::new(3, 0, 1).passed);
        assert!(!Summary::new(3, 1, 0).passed);
    }

    #[test]
    fn optional_csv_fields_round_trip() {
        let row = TransformRow {
            inequality_id: "eq45".into(),
            n: 5,
            m: 1,
            omega: Some(0.0),
            tightness: None,
            loewner_holds: None,
            tuple: "constant".into(),
            coefficient: None,
            lhs_norm: None,
            status: "skipped: singular kernel".into(),
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(&row).unwrap();
        let bytes = w.into_inner().unwrap();
        let mut r = csv::Reader::from_reader(bytes.as_slice());
        let back: TransformRow = r.deserialize().next().unwrap().unwrap();
        assert_eq!(back, row);
    }
}
