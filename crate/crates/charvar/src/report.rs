use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{conventions, OutputFormat, RunConfig};
use crate::formats::SCHEMA;
use crate::{CliError, CliResult};

/// Wraps a command result with the schema version, run configuration and
/// convention tags.
pub fn envelope(command: &str, body: &impl Serialize, config: &RunConfig) -> CliResult<Value> {
    let body = serde_json::to_value(body).map_err(|e| CliError::Usage(format!("cannot serialize report: {e}")))?;
    let Value::Object(fields) = body else {
        return Err(CliError::Usage("report body must be a JSON object".into()));
    };
    let mut out = Map::new();
    out.insert("schema".into(), SCHEMA.into());
    out.insert("command".into(), command.into());
    for (k, v) in fields {
        out.insert(k, v);
    }
    out.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
    out.insert("conventions".into(), serde_json::to_value(conventions()).expect("conventions serialize"));
    Ok(Value::Object(out))
}

pub fn render(report: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("JSON values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Table => table(report),
    }
}

/// One `key  value` line per leaf, keys joined with dots, columns aligned.
fn table(report: &Value) -> String {
    let mut rows = Vec::new();
    flatten(String::new(), report, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

fn flatten(prefix: String, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| if prefix.is_empty() { key.to_string() } else { format!("{prefix}.{key}") };
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(join(k), x, rows);
            }
        }
        Value::Array(a) if !a.is_empty() && a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(join(&i.to_string()), x, rows);
            }
        }
        Value::String(s) => rows.push((prefix, s.clone())),
        other => rows.push((prefix, other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn envelope_carries_config_and_conventions() {
        let r = envelope("cohomology", &json!({"h0": 3, "h1": 6}), &RunConfig::default()).unwrap();
        assert_eq!(r["schema"], 1);
        assert_eq!(r["h1"], 6);
        assert_eq!(r["config"]["tolerance"], 1e-8);
        assert!(r["conventions"]["torsion"].is_string());
        assert!(envelope("x", &json!([1, 2]), &RunConfig::default()).is_err());
    }

    #[test]
    fn table_flattens_nested_values() {
        let t = table(&json!({"a": {"b": 1, "c": [1, 2]}, "d": [{"e": "x"}]}));
        assert_eq!(t, "a.b    1\na.c    [1,2]\nd.0.e  x\n");
    }
}
