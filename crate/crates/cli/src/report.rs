//! Rendering of command reports as JSON, `field,value` CSV or plain text.
//!
//! CSV and text flatten the JSON tree into dotted paths (`a.b.0`), so all
//! three formats carry the same fields.

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

pub fn render<T: Serialize>(report: &T, format: Format) -> Result<String> {
    let value = serde_json::to_value(report)?;
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&value)? + "\n"),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["field", "value"])?;
            for (field, v) in flatten(&value) {
                w.write_record([field, v])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Text => Ok(flatten(&value)
            .into_iter()
            .map(|(f, v)| format!("{f}: {v}\n"))
            .collect()),
    }
}

/// Leaves of a JSON tree as `(dotted path, scalar text)`, keys sorted.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    walk(value, String::new(), &mut out);
    out
}

fn walk(value: &Value, path: String, out: &mut Vec<(String, String)>) {
    let child = |key: &str| {
        if path.is_empty() {
            key.to_string()
        } else {
            format!("{path}.{key}")
        }
    };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| walk(v, child(k), out)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| walk(v, child(&i.to_string()), out)),
        Value::String(s) => out.push((path, s.clone())),
        Value::Null => out.push((path, String::new())),
        other => out.push((path, other.to_string())),
    }
}

/// Reads back the `(field, value)` rows written by [`render`] in CSV form.
pub fn parse_csv(text: &str) -> Result<Vec<(String, String)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        rows.push((
            record[0].to_string(),
            record.get(1).unwrap_or("").to_string(),
        ));
    }
    Ok(rows)
}
