use anyhow::Result;
use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Arrays of objects become one row per element; a single object becomes
/// `field,value` pairs.
fn to_csv(value: &Value) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match value {
        Value::Array(items) => {
            if let Some(Value::Object(first)) = items.first() {
                w.write_record(first.keys())?;
                for item in items {
                    let row: Vec<String> = first.keys().map(|k| cell(&item[k])).collect();
                    w.write_record(&row)?;
                }
            }
        }
        Value::Object(map) => {
            w.write_record(["field", "value"])?;
            for (k, v) in map {
                w.write_record([k.as_str(), &cell(v)])?;
            }
        }
        other => w.write_record([cell(other)])?,
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn render(format: Format, value: &Value, table: impl FnOnce() -> String) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value)?;
            s.push('\n');
            s
        }
        Format::Csv => to_csv(value)?,
        Format::Table => {
            let mut s = table();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    })
}
