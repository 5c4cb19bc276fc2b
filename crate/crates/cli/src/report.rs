//! Ordered key/value reports rendered as text or JSON.

use serde_json::{Map, Value};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct Report {
    fields: Vec<(&'static str, Value)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            fields: vec![("schema", SCHEMA.into()), ("command", command.into())],
        }
    }

    pub fn push(&mut self, key: &'static str, value: impl Into<Value>) {
        self.fields.push((key, value.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let map: Map<String, Value> = self.fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
                let mut out = serde_json::to_string_pretty(&Value::Object(map)).expect("values serialize");
                out.push('\n');
                out
            }
            Format::Text => {
                let mut out = String::new();
                for (key, value) in &self.fields {
                    render_text(&mut out, key, value);
                }
                out
            }
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render_text(out: &mut String, key: &str, value: &Value) {
    match value {
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str(&format!("{key}:\n"));
            for item in items {
                out.push_str(&format!("  {}\n", compact(item)));
            }
        }
        Value::Object(map) => {
            out.push_str(&format!("{key}:\n"));
            for (k, v) in map {
                out.push_str(&format!("  {k}: {}\n", compact(v)));
            }
        }
        other => out.push_str(&format!("{key}: {}\n", compact(other))),
    }
}
