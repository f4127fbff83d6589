//! Deterministic data-file writers. Curve tables go to CSV (schema in a
//! leading comment line) or JSON (schema as a field); reports are always
//! JSON. Floats print through Rust's shortest round-trip formatter, so
//! identical runs produce byte-identical files.

use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A column-oriented table of optional values; `None` marks samples outside
/// a bound's validity window.
pub struct CurveTable {
    pub schema: &'static str,
    pub comments: Vec<String>,
    pub columns: Vec<(String, Vec<Option<f64>>)>,
}

impl CurveTable {
    pub fn new(schema: &'static str) -> Self {
        CurveTable {
            schema,
            comments: Vec::new(),
            columns: Vec::new(),
        }
    }

    pub fn comment(&mut self, text: impl Into<String>) {
        self.comments.push(text.into());
    }

    pub fn push_full(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.columns
            .push((name.into(), values.into_iter().map(Some).collect()));
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<Option<f64>>) {
        self.columns.push((name.into(), values));
    }

    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<PathBuf, String> {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        let body = match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json()?,
        };
        std::fs::write(&path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        Ok(path)
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema {}", self.schema);
        for comment in &self.comments {
            let _ = writeln!(out, "# {comment}");
        }
        let header: Vec<&str> = self.columns.iter().map(|(n, _)| n.as_str()).collect();
        let _ = writeln!(out, "{}", header.join(","));
        let rows = self.columns.first().map_or(0, |(_, v)| v.len());
        for i in 0..rows {
            let mut first = true;
            for (_, values) in &self.columns {
                if !first {
                    out.push(',');
                }
                first = false;
                if let Some(v) = values[i] {
                    let _ = write!(out, "{v}");
                }
            }
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> Result<String, String> {
        #[derive(Serialize)]
        struct Column<'a> {
            name: &'a str,
            values: &'a [Option<f64>],
        }
        #[derive(Serialize)]
        struct Table<'a> {
            schema: &'a str,
            comments: &'a [String],
            columns: Vec<Column<'a>>,
        }
        let table = Table {
            schema: self.schema,
            comments: &self.comments,
            columns: self
                .columns
                .iter()
                .map(|(name, values)| Column { name, values })
                .collect(),
        };
        serde_json::to_string_pretty(&table).map_err(|e| e.to_string())
    }
}

/// Serialize a report as pretty JSON.
pub fn write_json<T: Serialize>(dir: &Path, stem: &str, value: &T) -> Result<PathBuf, String> {
    let path = dir.join(format!("{stem}.json"));
    let body = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    std::fs::write(&path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path)
}
