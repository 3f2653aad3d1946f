//! Result emission: JSON for single results, CSV for series.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::CliResult;

/// Formats a float with 17 significant digits.
pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => float(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

/// Collects rows of a series; in CSV mode each row is written as soon as it
/// arrives, so long scans show progress.
pub struct Sink {
    format: Format,
    columns: Vec<&'static str>,
    writer: Option<csv::Writer<io::Stdout>>,
    rows: Vec<Value>,
}

impl Sink {
    pub fn new(format: Format) -> Self {
        Sink {
            format,
            columns: Vec::new(),
            writer: None,
            rows: Vec::new(),
        }
    }

    /// Records one row; `fields` fixes the column order.
    pub fn row(&mut self, fields: Vec<(&'static str, Value)>) -> CliResult<()> {
        if self.format == Format::Csv {
            if self.writer.is_none() {
                self.columns = fields.iter().map(|(k, _)| *k).collect();
                let mut w = csv::Writer::from_writer(io::stdout());
                w.write_record(&self.columns)?;
                self.writer = Some(w);
            }
            let w = self.writer.as_mut().expect("writer initialised above");
            w.write_record(fields.iter().map(|(_, v)| cell(v)))?;
            w.flush()?;
        }
        self.rows.push(Value::Object(
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        ));
        Ok(())
    }

    pub fn rows(&self) -> &[Value] {
        &self.rows
    }

    /// Prints the final result. Series already streamed as CSV print nothing
    /// more; a single JSON object in CSV mode becomes a one-row table.
    pub fn finish(&mut self, output: &Value) -> CliResult<()> {
        match self.format {
            Format::Json => {
                let mut out = io::stdout().lock();
                serde_json::to_writer_pretty(&mut out, output)?;
                writeln!(out)?;
            }
            Format::Csv if self.writer.is_some() => {}
            Format::Csv => {
                let obj = match output {
                    Value::Object(m) => m.clone(),
                    other => Map::from_iter([("value".to_string(), other.clone())]),
                };
                let mut w = csv::Writer::from_writer(io::stdout());
                w.write_record(obj.keys())?;
                w.write_record(obj.values().map(cell))?;
                w.flush()?;
            }
        }
        Ok(())
    }
}
