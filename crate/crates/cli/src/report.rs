//! Experiment reports, CSV tables and the all-or-nothing output writer.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use expheat_core::InequalityCheck;
use serde::Serialize;
use serde_json::Value;

/// One verified statement. `claim` names the mathematical statement the
/// check exercises, or `"plumbing"` for bookkeeping checks.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    /// Report-only records never fail a run.
    pub gating: bool,
    pub note: String,
    pub claim: String,
}

impl Record {
    /// `lhs ≤ rhs` style record built from a library check.
    pub fn inequality(name: impl Into<String>, c: &InequalityCheck, claim: &str) -> Self {
        Self {
            name: name.into(),
            lhs: c.lhs,
            rhs: c.rhs,
            margin: c.margin(),
            pass: c.pass,
            gating: true,
            note: String::new(),
            claim: claim.into(),
        }
    }

    /// `|value - target| ≤ tol`.
    pub fn close(name: impl Into<String>, value: f64, target: f64, tol: f64, claim: &str) -> Self {
        let err = (value - target).abs();
        Self {
            name: name.into(),
            lhs: value,
            rhs: target,
            margin: tol - err,
            pass: err <= tol,
            gating: true,
            note: format!("|lhs - rhs| = {err:.3e}, tolerance {tol:e}"),
            claim: claim.into(),
        }
    }

    /// `value ≤ bound`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, claim: &str) -> Self {
        Self {
            name: name.into(),
            lhs: value,
            rhs: bound,
            margin: bound - value,
            pass: value <= bound,
            gating: true,
            note: String::new(),
            claim: claim.into(),
        }
    }

    /// Boolean verdict; lhs/rhs carry 1/0 for uniform tables.
    pub fn verdict(name: impl Into<String>, pass: bool, note: impl Into<String>, claim: &str) -> Self {
        Self {
            name: name.into(),
            lhs: if pass { 1.0 } else { 0.0 },
            rhs: 1.0,
            margin: if pass { 0.0 } else { -1.0 },
            pass,
            gating: true,
            note: note.into(),
            claim: claim.into(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn report_only(mut self) -> Self {
        self.gating = false;
        self
    }
}

/// Rectangular table written as RFC-4180 CSV.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = row.into_iter().map(|x| x.to_string()).collect();
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_f64(&mut self, row: &[f64]) {
        self.push(row.iter().map(|x| format!("{x:e}")));
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner().context("flushing CSV")?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub description: String,
    pub seed: u64,
    /// Effective parameters, defaults included.
    pub config: BTreeMap<String, Value>,
    pub records: Vec<Record>,
    /// Free-form numbers worth keeping (fitted constants, thresholds).
    pub summary: BTreeMap<String, Value>,
    pub tables: Vec<String>,
    pub pass: bool,
    pub timing_s: f64,
}

/// Everything an experiment produces before it touches the disk.
#[derive(Default)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub summary: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
    /// Extra files (relative path, bytes), e.g. `.gfn` snapshots.
    pub files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outcome {
    pub fn record(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.into(), value.into());
    }

    pub fn pass(&self) -> bool {
        self.records.iter().filter(|r| r.gating).all(|r| r.pass)
    }
}

/// Writes files into `dir`, removing whatever it created if any write fails.
pub fn write_all(dir: &Path, files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    let mut created_dirs = Vec::new();
    let mut cursor = Some(dir);
    while let Some(d) = cursor {
        if d.as_os_str().is_empty() || d.exists() {
            break;
        }
        created_dirs.push(d.to_path_buf());
        cursor = d.parent();
    }
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| -> Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (rel, bytes) in files {
            let path = dir.join(rel);
            if let Some(parent) = path.parent() {
                if !parent.exists() {
                    std::fs::create_dir_all(parent)?;
                    created_dirs.push(parent.to_path_buf());
                }
            }
            std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
        Ok(())
    })();
    if result.is_err() {
        for p in written.iter().rev() {
            let _ = std::fs::remove_file(p);
        }
        created_dirs.sort_by_key(|d| std::cmp::Reverse(d.components().count()));
        for d in created_dirs {
            let _ = std::fs::remove_dir(d);
        }
    }
    result
}
