use std::collections::BTreeSet;

use serde_json::Value;

use crate::commands::Body;
use crate::Format;

/// JSON is the full output; CSV is one row per record, columns sorted by name.
pub fn render(body: &Body, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(&body.json)
            .map(|s| s + "\n")
            .map_err(|e| e.to_string()),
        Format::Csv => csv_rows(&body.records),
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn csv_rows(records: &[Value]) -> Result<String, String> {
    let columns: BTreeSet<&str> = records
        .iter()
        .filter_map(Value::as_object)
        .flat_map(|m| m.keys().map(String::as_str))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns).map_err(|e| e.to_string())?;
    for r in records {
        w.write_record(columns.iter().map(|c| cell(r.get(*c))))
            .map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}
