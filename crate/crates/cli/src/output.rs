//! Rendering of value tables in the supported text formats.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use bcs_core::Score;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct JsonRow {
    pub x: usize,
    /// Marker-Left values, `p` ascending.
    pub values: Vec<Score>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct JsonTable {
    pub schema_version: u32,
    pub tb: usize,
    pub rows: Vec<JsonRow>,
}

impl JsonTable {
    pub fn new(tb: usize, rows: &[Vec<Score>]) -> Self {
        JsonTable {
            schema_version: SCHEMA_VERSION,
            tb,
            rows: rows
                .iter()
                .enumerate()
                .map(|(x, values)| JsonRow { x, values: values.clone() })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<(usize, Vec<Vec<Score>>)> {
        let table: JsonTable = serde_json::from_str(text)?;
        if table.schema_version != SCHEMA_VERSION {
            bail!("unsupported schema_version {}", table.schema_version);
        }
        let mut rows = Vec::with_capacity(table.rows.len());
        for (i, row) in table.rows.into_iter().enumerate() {
            if row.x != i {
                bail!("rows must be listed for x = 0, 1, 2, ...; found x = {} at position {i}", row.x);
            }
            if row.values.len() != table.tb + 1 {
                bail!("row x = {} has {} values, expected {}", row.x, row.values.len(), table.tb + 1);
            }
            rows.push(row.values);
        }
        Ok((table.tb, rows))
    }
}

/// Rows with the largest budget first, as `p^` column headers.
pub fn text_table(tb: usize, rows: &[(String, Vec<Score>)]) -> String {
    let label_width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(1).max(1);
    let cell = rows
        .iter()
        .flat_map(|(_, v)| v.iter().map(|s| s.to_string().len()))
        .chain((0..=tb).map(|p| p.to_string().len() + 1))
        .max()
        .unwrap_or(2);
    let mut out = String::new();
    let _ = write!(out, "{:>label_width$} |", "x");
    for p in (0..=tb).rev() {
        let _ = write!(out, " {:>cell$}", format!("{p}^"));
    }
    out.push('\n');
    for (label, values) in rows {
        let _ = write!(out, "{label:>label_width$} |");
        for v in values.iter().rev() {
            let _ = write!(out, " {v:>cell$}");
        }
        out.push('\n');
    }
    out
}

pub fn csv(rows: &[Vec<Score>]) -> String {
    let mut out = String::from("x,p,marker,value\n");
    for (x, row) in rows.iter().enumerate() {
        for (p, v) in row.iter().enumerate() {
            let _ = writeln!(out, "{x},{p},L,{v}");
        }
    }
    out
}
