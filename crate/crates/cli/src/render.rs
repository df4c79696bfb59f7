use serde_json::Value;

use crate::Format;

pub fn render(body: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(body).expect("reports serialize"),
        Format::Text => {
            let mut out = String::new();
            text(body, "", &mut out);
            out.pop();
            out
        }
    }
}

/// One `path: value` line per leaf; short scalar arrays stay on one line.
fn text(value: &Value, path: &str, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let child = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                text(v, &child, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.as_array().is_some_and(|a| a.len() > 2)) => {
            for (i, v) in items.iter().enumerate() {
                text(v, &format!("{path}[{i}]"), out);
            }
        }
        leaf => {
            out.push_str(path);
            out.push_str(": ");
            out.push_str(&leaf.to_string());
            out.push('\n');
        }
    }
}
