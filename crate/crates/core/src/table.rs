//! Minimal reader for the comma-separated text tables used by every data
//! file in this crate.
//!
//! The shared format: UTF-8, `.` decimal separator, `#` comment lines,
//! optional `# key = value` metadata lines, one required header row naming
//! the columns, then data rows. Parse errors cite the origin and 1-based
//! line number.

use crate::error::{Error, Result};
use std::fs;
use std::path::Path;

/// One data row, with the line number it came from.
#[derive(Debug, Clone)]
pub struct Row {
    pub line: usize,
    pub fields: Vec<String>,
}

/// A parsed text table: metadata, header, and data rows.
#[derive(Debug, Clone)]
pub struct Table {
    /// Path or label the table was read from, used in error messages.
    pub origin: String,
    /// `# key = value` lines, in file order.
    pub meta: Vec<(String, String)>,
    /// Header column names, trimmed.
    pub header: Vec<String>,
    pub rows: Vec<Row>,
}

/// Reads and parses a table file.
pub fn load_table(path: &Path) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_table(&text, &path.display().to_string())
}

/// Parses table text. `origin` labels the source in error messages.
pub fn parse_table(text: &str, origin: &str) -> Result<Table> {
    let mut meta = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let fields: Vec<String> = line.split(',').map(|f| f.trim().to_string()).collect();
        match header {
            None => header = Some(fields),
            Some(ref h) => {
                if fields.len() != h.len() {
                    return Err(Error::parse(
                        origin,
                        line_no,
                        format!("expected {} fields, found {}", h.len(), fields.len()),
                    ));
                }
                rows.push(Row {
                    line: line_no,
                    fields,
                });
            }
        }
    }

    let header = header
        .ok_or_else(|| Error::parse(origin, 1, "missing header row"))?;
    Ok(Table {
        origin: origin.to_string(),
        meta,
        header,
        rows,
    })
}

impl Table {
    /// Index of the first column whose name matches any alias
    /// (case-insensitive).
    pub fn find_column(&self, aliases: &[&str]) -> Option<usize> {
        self.header.iter().position(|name| {
            aliases.iter().any(|a| name.eq_ignore_ascii_case(a))
        })
    }

    /// Indices of required columns by exact name (case-insensitive), erroring
    /// on the first one missing.
    pub fn require_columns(&self, names: &[&str]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|name| {
                self.find_column(&[name]).ok_or_else(|| {
                    Error::parse(
                        &self.origin,
                        1,
                        format!("missing required column `{name}` (header: {})", self.header.join(",")),
                    )
                })
            })
            .collect()
    }

    /// First metadata value recorded under `key`, if any.
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(key))
            .map(|(_, v)| v.as_str())
    }

    /// Builds a parse error pointing at a line of this table.
    pub fn err_at(&self, line: usize, message: impl Into<String>) -> Error {
        Error::parse(&self.origin, line, message)
    }

    /// Parses one field of a row as `f64`.
    pub fn f64_field(&self, row: &Row, col: usize) -> Result<f64> {
        let text = &row.fields[col];
        text.parse().map_err(|_| {
            self.err_at(
                row.line,
                format!("column `{}`: `{text}` is not a number", self.header[col]),
            )
        })
    }

    /// Parses one field of a row as `u32`.
    pub fn u32_field(&self, row: &Row, col: usize) -> Result<u32> {
        let text = &row.fields[col];
        text.parse().map_err(|_| {
            self.err_at(
                row.line,
                format!("column `{}`: `{text}` is not a port number", self.header[col]),
            )
        })
    }

    /// Parses one field of a row as a boolean flag. Accepts
    /// `true/false`, `yes/no`, `1/0` (case-insensitive).
    pub fn bool_field(&self, row: &Row, col: usize) -> Result<bool> {
        let text = row.fields[col].to_ascii_lowercase();
        match text.as_str() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(self.err_at(
                row.line,
                format!(
                    "column `{}`: `{}` is not a boolean (use true/false, yes/no, or 1/0)",
                    self.header[col], row.fields[col]
                ),
            )),
        }
    }
}
