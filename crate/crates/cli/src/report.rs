//! Structured reports: `key: value` lines nested by indentation, with a JSON
//! mirror that keeps the same key order.

use serde_json::{Map, Value as Json};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Text(String),
    Int(i128),
    Bool(bool),
    List(Vec<Value>),
    Section(Report),
}

impl From<&str> for Value {
    fn from(s: &str) -> Value {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Value {
        Value::Text(s)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Value {
        Value::Bool(b)
    }
}

impl From<Report> for Value {
    fn from(r: Report) -> Value {
        Value::Section(r)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(v: $t) -> Value {
                Value::Int(v as i128)
            }
        }
    )*};
}
int_value!(usize, u64, u128, isize, i64, u32);

impl<T: Into<Value>> From<Vec<T>> for Value {
    fn from(items: Vec<T>) -> Value {
        Value::List(items.into_iter().map(Into::into).collect())
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Value {
        v.map_or(Value::Text("none".into()), Into::into)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Report {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.entries.push((key.to_string(), value.into()));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_entries(&self.entries, 0, &mut out);
        out
    }

    pub fn to_json(&self) -> Json {
        section_json(&self.entries)
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Text(s) => Some(s.clone()),
        Value::Int(i) => Some(i.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::List(items) if items.is_empty() => Some("[]".into()),
        _ => None,
    }
}

fn write_entries(entries: &[(String, Value)], depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (key, value) in entries {
        match scalar(value) {
            Some(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{key}:\n"));
                write_value(value, depth + 1, out);
            }
        }
    }
}

fn write_value(value: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Section(r) => write_entries(&r.entries, depth, out),
        Value::List(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(item, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

fn section_json(entries: &[(String, Value)]) -> Json {
    let mut map = Map::new();
    for (key, value) in entries {
        map.insert(key.clone(), value_json(value));
    }
    Json::Object(map)
}

fn value_json(value: &Value) -> Json {
    match value {
        Value::Text(s) => Json::String(s.clone()),
        // i128 values stay exact as strings once they leave the i64 range
        Value::Int(i) => i64::try_from(*i).map_or_else(|_| Json::String(i.to_string()), Json::from),
        Value::Bool(b) => Json::Bool(*b),
        Value::List(items) => Json::Array(items.iter().map(value_json).collect()),
        Value::Section(r) => section_json(&r.entries),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_text_layout() {
        let r = Report::new()
            .with("command", "run")
            .with("accepted", true)
            .with("inner", Report::new().with("n", 3usize))
            .with("items", vec!["a", "b"])
            .with("nothing", Vec::<String>::new());
        assert_eq!(
            r.to_text(),
            "command: run\naccepted: true\ninner:\n  n: 3\nitems:\n  - a\n  - b\nnothing: []\n"
        );
        assert_eq!(
            r.to_json().to_string(),
            r#"{"command":"run","accepted":true,"inner":{"n":3},"items":["a","b"],"nothing":[]}"#
        );
    }
}
