//! Reports: a metadata header, a summary object and a table, written as
//! CSV (header on a `# ` comment line) or as one JSON document.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use helfrich_core::SignConvention;

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u8> for Cell {
    fn from(x: u8) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Shortest decimal that reads back to the same binary64. Negative zero
/// prints as `0.0`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0.0".into()
    } else if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        ryu::Buffer::new().format_finite(x).to_string()
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Parameter echo and provenance of one run.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub params: Value,
    pub format: Format,
    pub seed: Option<u64>,
    pub sign_convention: Value,
    pub timestamp: String,
}

impl Metadata {
    pub fn new(command: &'static str, params: Value, format: Format, seed: Option<u64>) -> Self {
        let conv = SignConvention::RESOLVED;
        Metadata {
            tool: "helfrich",
            version: env!("CARGO_PKG_VERSION"),
            command,
            params,
            format,
            seed,
            sign_convention: json!({ "sigma": conv.sign(), "psi": conv.label() }),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub summary: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Report {
            summary: Map::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, meta: &Metadata, out: &mut dyn Write) -> Result<(), CliError> {
        let mut header = match serde_json::to_value(meta).expect("metadata serializes") {
            Value::Object(m) => m,
            _ => unreachable!(),
        };
        header.insert("summary".into(), Value::Object(self.summary.clone()));
        match meta.format {
            Format::Csv => {
                writeln!(out, "# {}", Value::Object(header))?;
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::to_csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(
                            self.columns
                                .iter()
                                .zip(r)
                                .map(|(c, v)| (c.to_string(), v.to_json()))
                                .collect(),
                        )
                    })
                    .collect();
                let summary = header.remove("summary").unwrap_or(Value::Null);
                let doc = json!({ "metadata": Value::Object(header), "summary": summary, "rows": rows });
                serde_json::to_writer_pretty(&mut *out, &doc).map_err(|e| match e.io_error_kind() {
                    Some(std::io::ErrorKind::BrokenPipe) => CliError::Closed,
                    _ => CliError::Input(format!("cannot write output: {e}")),
                })?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}
