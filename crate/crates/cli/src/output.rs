//! Rendering reports as JSON or CSV.
//!
//! JSON uses serde_json's shortest-round-trip float encoding, so emitted
//! values parse back bit-exactly. CSV (and any human-readable float this
//! module prints) carries 17 significant digits for the same reason.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// 17-significant-digit rendering used in CSV cells.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::Null => "".to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.to_string()
            } else if let Some(u) = n.as_u64() {
                u.to_string()
            } else {
                format_float(n.as_f64().unwrap_or(f64::NAN))
            }
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flattens nested JSON into `(dotted.path, rendered value)` rows in
/// alphabetical key order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&key, child, rows);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), child, rows);
                }
            }
            leaf => rows.push((prefix.to_string(), render_value(leaf))),
        }
    }
    walk("", value, &mut rows);
    rows
}

/// One report as `key,value` CSV rows.
pub fn to_csv_keyed<T: Serialize>(report: &T) -> CliResult<String> {
    let value = serde_json::to_value(report).map_err(|e| CliError::Io(e.to_string()))?;
    let mut out = String::from("key,value\n");
    for (k, v) in flatten(&value) {
        out.push_str(&format!("{k},{v}\n"));
    }
    Ok(out)
}

/// A slice of records as tabular CSV: one header row from the first
/// record's flattened keys, one row per record.
pub fn to_csv_table<T: Serialize>(records: &[T]) -> CliResult<String> {
    let mut out = String::new();
    let mut header: Option<Vec<String>> = None;
    for record in records {
        let value = serde_json::to_value(record).map_err(|e| CliError::Io(e.to_string()))?;
        let rows = flatten(&value);
        if header.is_none() {
            let keys: Vec<String> = rows.iter().map(|(k, _)| k.clone()).collect();
            out.push_str(&keys.join(","));
            out.push('\n');
            header = Some(keys);
        }
        out.push_str(
            &rows
                .iter()
                .map(|(_, v)| v.clone())
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    Ok(out)
}

pub fn to_json<T: Serialize>(report: &T) -> CliResult<String> {
    let mut s =
        serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Emits to the path when given, stdout otherwise.
pub fn emit(text: &str, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("writing {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_keep_17_digits() {
        let s = format_float(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
        let parsed: f64 = "3.1415926535897931e0".parse().unwrap();
        assert_eq!(parsed, std::f64::consts::PI);
    }

    #[test]
    fn flatten_walks_nesting() {
        let v = json!({"a": {"b": 1, "c": [2.5, 3.0]}, "d": "x", "e": null});
        let rows = flatten(&v);
        let keys: Vec<&str> = rows.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, vec!["a.b", "a.c.0", "a.c.1", "d", "e"]);
        assert_eq!(rows[1].1, "2.5000000000000000e0");
    }

    #[test]
    fn csv_table_has_single_header() {
        #[derive(Serialize)]
        struct Row {
            x: u64,
            y: f64,
        }
        let rows = vec![Row { x: 1, y: 0.5 }, Row { x: 2, y: 1.5 }];
        let csv = to_csv_table(&rows).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "x,y");
    }
}
