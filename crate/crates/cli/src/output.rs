//! Result tables and run summaries.
//!
//! Tables are CSV (`#schema=1` line, header, rows) or JSON. Floats use the
//! shortest round-trip representation, so identical runs give identical bytes.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    fn csv_cell(v: &Value) -> String {
        match v {
            Value::Null => String::new(),
            Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = format!("#schema={SCHEMA_VERSION}\n{}\n", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Self::csv_cell).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.clone()))
                            .collect::<serde_json::Map<_, _>>();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({ "schema": SCHEMA_VERSION, "columns": self.columns, "rows": rows });
                let mut s = serde_json::to_string_pretty(&doc).expect("table values serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Finite floats as numbers, anything else as a string label.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

#[derive(Debug, Clone, Serialize)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    pub threshold: Value,
    pub value: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema: u32,
    pub command: &'static str,
    pub passed: bool,
    pub exit_code: i32,
    pub invariants: Vec<Invariant>,
    /// Rows that did not converge, by label.
    pub not_converged: Vec<String>,
    pub details: Value,
}

impl Summary {
    pub fn new(command: &'static str) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command,
            passed: true,
            exit_code: 0,
            invariants: Vec::new(),
            not_converged: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, threshold: Value, value: Value) {
        self.invariants.push(Invariant {
            name: name.into(),
            passed,
            threshold,
            value,
        });
    }

    /// 2 when an invariant failed, otherwise 3 when something did not converge.
    pub fn finalize(&mut self) {
        let failed = self.invariants.iter().any(|i| !i.passed);
        self.passed = !failed && self.not_converged.is_empty();
        self.exit_code = if failed {
            2
        } else if !self.not_converged.is_empty() {
            3
        } else {
            0
        };
    }
}

pub fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".summary.json");
    PathBuf::from(s)
}

/// Writes the table to `out` (stdout when absent) and the summary next to it
/// (stderr when absent).
pub fn emit(table: &Table, summary: &Summary, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let body = table.render(format);
    let mut summary_text = serde_json::to_string_pretty(summary).expect("summary serializes");
    summary_text.push('\n');
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, body)?;
            std::fs::write(summary_path(path), summary_text)?;
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            std::io::stderr().write_all(summary_text.as_bytes())?;
        }
    }
    Ok(())
}
