//! Reading numeric series from text.
//!
//! One value per line, or delimited columns (comma, tab or whitespace). Blank
//! lines and lines starting with `#` are skipped. A first row that does not
//! parse as numbers is taken as a header. Multi-column input needs an explicit
//! column, given as a header name or a 1-based index.

use crate::error::{Error, Result};
use std::path::Path;

fn split_fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

fn resolve_column(column: &str, header: Option<&[&str]>, width: usize) -> Result<usize> {
    if let Some(h) = header {
        if let Some(i) = h.iter().position(|name| *name == column) {
            return Ok(i);
        }
    }
    match column.parse::<usize>() {
        Ok(i) if (1..=width).contains(&i) => Ok(i - 1),
        _ => Err(Error::Input(format!("no column {column:?} among {width} columns"))),
    }
}

pub fn parse_series(text: &str, column: Option<&str>) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    let mut index: Option<usize> = None;
    let mut seen_row = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split_fields(line);
        if !seen_row {
            seen_row = true;
            let numeric = fields.iter().all(|f| f.parse::<f64>().is_ok());
            let header = if numeric { None } else { Some(fields.as_slice()) };
            index = Some(match column {
                Some(c) => resolve_column(c, header, fields.len())?,
                None if fields.len() == 1 => 0,
                None => {
                    return Err(Error::Input(format!("input has {} columns; choose one with --column", fields.len())))
                }
            });
            if !numeric {
                continue;
            }
        }
        let i = index.expect("column resolved on first row");
        let text = fields.get(i).ok_or_else(|| Error::Parse { line: lineno + 1, text: line.to_string() })?;
        let v: f64 = text.parse().map_err(|_| Error::Parse { line: lineno + 1, text: text.to_string() })?;
        if !v.is_finite() {
            return Err(Error::Parse { line: lineno + 1, text: text.to_string() });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Input("no numeric values in input".into()));
    }
    Ok(values)
}

pub fn read_series(path: &Path, column: Option<&str>) -> Result<Vec<f64>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_series(&text, column)
}
