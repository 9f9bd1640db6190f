//! The document every subcommand emits, and its JSON and CSV encodings.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        OutputRecord {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs: Map::new(),
            rows: Vec::new(),
        }
    }

    /// Parses a JSON document, rejecting any schema version other than ours.
    pub fn from_json(text: &str) -> Result<Self, String> {
        let record: OutputRecord = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if record.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema_version {:?}", record.schema_version));
        }
        Ok(record)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("maps with string keys always serialize");
        s.push('\n');
        s
    }

    /// One header row, then one line per row. Nested objects are flattened
    /// into dotted column names; columns appear in first-seen order and
    /// missing cells are left empty.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let flat: Vec<Vec<(String, String)>> = self
            .rows
            .iter()
            .map(|row| {
                let mut cells = Vec::new();
                flatten("", row, &mut cells);
                cells
            })
            .collect();

        let mut columns: Vec<String> = Vec::new();
        for cells in &flat {
            for (name, _) in cells {
                if !columns.contains(name) {
                    columns.push(name.clone());
                }
            }
        }

        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&columns)?;
        for cells in &flat {
            let record = columns.iter().map(|c| {
                cells
                    .iter()
                    .find(|(name, _)| name == c)
                    .map(|(_, v)| v.as_str())
                    .unwrap_or("")
            });
            w.write_record(record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

fn flatten(prefix: &str, map: &Map<String, Value>, out: &mut Vec<(String, String)>) {
    for (key, value) in map {
        let name = if prefix.is_empty() {
            key.clone()
        } else {
            format!("{prefix}.{key}")
        };
        match value {
            Value::Object(inner) => flatten(&name, inner, out),
            other => out.push((name, csv_cell(other))),
        }
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format_float(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// 17 significant digits: enough for every `f64` to survive a round trip.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        non_finite(x).to_string()
    }
}

fn non_finite(x: f64) -> &'static str {
    if x.is_nan() {
        "NaN"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

/// JSON has no NaN or infinity; those become the strings `"NaN"`, `"inf"`
/// and `"-inf"`.
pub fn float(x: f64) -> Value {
    match Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(non_finite(x).to_string()),
    }
}

/// Reads back a value written by [`float`].
pub fn parse_float(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => match s.as_str() {
            "NaN" => Some(f64::NAN),
            "inf" => Some(f64::INFINITY),
            "-inf" => Some(f64::NEG_INFINITY),
            _ => None,
        },
        _ => None,
    }
}
