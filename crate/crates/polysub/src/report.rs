//! Report emission: CSV with RFC-4180 quoting, or JSON as `{meta, rows}`.
//!
//! Bodies are deterministic functions of the run configuration: no timestamps,
//! no machine identifiers, fixed field order per subcommand. This is what makes
//! the thread-count-independence checks meaningful at the byte level.

use serde::Serialize;
use serde_json::{Map, Value, json};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A homogeneous record table plus a metadata block echoing the run parameters.
#[derive(Debug, Clone)]
pub struct Report {
    pub meta: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Quotes a CSV field per RFC 4180 when it contains a comma, quote, or newline.
pub fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

impl Report {
    pub fn new<S: Into<String>>(meta: Value, header: Vec<S>) -> Self {
        Report { meta, header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.iter().map(|h| csv_escape(h)).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|f| csv_escape(f)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (h, v) in self.header.iter().zip(row) {
                    obj.insert(h.clone(), Value::String(v.clone()));
                }
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "meta": self.meta, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("report is valid JSON");
        s.push('\n');
        s
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// JSON for a single structured report (used where one nested object says more
/// than a flat table, e.g. certificates).
pub fn emit_value<T: Serialize>(meta: Value, value: &T) -> String {
    let doc = json!({ "meta": meta, "report": value });
    let mut s = serde_json::to_string_pretty(&doc).expect("report is valid JSON");
    s.push('\n');
    s
}
