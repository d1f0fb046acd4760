//! CSV ingestion: `x,y,p` Hermite data and `x,y` function tables.

use std::path::Path;

use anyhow::{Context, Result};
use csv::StringRecord;

use crate::CliError;

/// Columns of a CSV file, selected by header name.
fn read_columns(path: &Path, names: &[&str], optional: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let headers = reader.headers()?.clone();
    let index = |name: &str| headers.iter().position(|h| h == name);
    let mut wanted = Vec::new();
    for name in names {
        let i = index(name)
            .ok_or_else(|| CliError::Input(format!("{}: missing column `{name}`", path.display())))?;
        wanted.push(i);
    }
    for name in optional {
        if let Some(i) = index(name) {
            wanted.push(i);
        }
    }
    let mut columns = vec![Vec::new(); wanted.len()];
    for (row, record) in reader.records().enumerate() {
        let record: StringRecord = record?;
        for (col, &i) in wanted.iter().enumerate() {
            let cell = record.get(i).unwrap_or("");
            let v: f64 = cell.parse().map_err(|_| {
                CliError::Input(format!("{}: row {}: `{cell}` is not a number", path.display(), row + 2))
            })?;
            if !v.is_finite() {
                return Err(CliError::Input(format!("{}: row {}: non-finite value", path.display(), row + 2)).into());
            }
            columns[col].push(v);
        }
    }
    Ok(columns)
}

pub struct HermiteTable {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub p: Vec<f64>,
}

pub fn read_hermite(path: &Path) -> Result<HermiteTable> {
    let mut cols = read_columns(path, &["x", "y", "p"], &[])?;
    let p = cols.pop().expect("three columns");
    let y = cols.pop().expect("three columns");
    let x = cols.pop().expect("three columns");
    Ok(HermiteTable { x, y, p })
}

/// A sampled function `x ↦ y`, sorted by `x`.
pub struct FunctionTable {
    rows: Vec<(f64, f64)>,
}

impl FunctionTable {
    pub fn read(path: &Path) -> Result<Self> {
        let cols = read_columns(path, &["x", "y"], &[])?;
        let mut rows: Vec<(f64, f64)> = cols[0].iter().copied().zip(cols[1].iter().copied()).collect();
        if rows.is_empty() {
            return Err(CliError::Input(format!("{}: table has no rows", path.display())).into());
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { rows })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.rows[0].0, self.rows[self.rows.len() - 1].0)
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    /// Value at the table row nearest to `x`, if it lies within
    /// `tol·max(1, |x|)`.
    pub fn lookup(&self, x: f64, tol: f64) -> Option<f64> {
        let j = self.rows.partition_point(|r| r.0 < x);
        let candidates = [j.checked_sub(1), Some(j)];
        candidates
            .into_iter()
            .flatten()
            .filter_map(|k| self.rows.get(k))
            .min_by(|a, b| (a.0 - x).abs().total_cmp(&(b.0 - x).abs()))
            .filter(|r| (r.0 - x).abs() <= tol * x.abs().max(1.0))
            .map(|r| r.1)
    }
}
