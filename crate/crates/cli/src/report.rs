//! Run reports and their text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use starlab::Commitment;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Inconclusive => 3,
        }
    }

    /// The worse of two statuses.
    pub fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// What a subcommand produces before the report is assembled.
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    pub results: Value,
    pub log: Vec<Commitment>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub schema_version: u32,
    pub subcommand: String,
    pub config: BTreeMap<String, String>,
    pub status: Status,
    pub exit_code: i32,
    pub summary: String,
    pub results: Value,
    pub commitment_log: Vec<Commitment>,
    pub timing_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

/// Drops the fields that legitimately differ between identical runs.
pub fn comparable(report: &Value) -> Value {
    let mut v = report.clone();
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timingMs");
    }
    v
}

/// Paths at which two JSON values differ, up to `limit` of them.
pub fn differences(a: &Value, b: &Value, limit: usize) -> Vec<String> {
    fn walk(a: &Value, b: &Value, path: String, out: &mut Vec<String>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        match (a, b) {
            (Value::Object(x), Value::Object(y)) => {
                let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
                for k in keys {
                    match (x.get(k), y.get(k)) {
                        (Some(p), Some(q)) => walk(p, q, format!("{path}/{k}"), out, limit),
                        _ => out.push(format!("{path}/{k}")),
                    }
                }
            }
            (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
                for (i, (p, q)) in x.iter().zip(y).enumerate() {
                    walk(p, q, format!("{path}/{i}"), out, limit);
                }
            }
            _ if a != b => out.push(if path.is_empty() { "/".into() } else { path }),
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(a, b, String::new(), &mut out, limit);
    out
}

/// Rows shown for long arrays in the text rendering.
const MAX_ROWS: usize = 24;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes".into() } else { "no".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => Some(format!(
            "[{}]",
            a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

/// Arrays of flat objects with one key set render as tables.
fn table(items: &[Value]) -> Option<Vec<Vec<String>>> {
    let first = items.first()?.as_object()?;
    let keys: Vec<&String> = first.keys().collect();
    let mut rows = vec![keys.iter().map(|k| k.to_string()).collect::<Vec<_>>()];
    for item in items {
        let obj = item.as_object()?;
        if obj.len() != keys.len() {
            return None;
        }
        let row = keys
            .iter()
            .map(|k| obj.get(*k).and_then(scalar))
            .collect::<Option<Vec<_>>>()?;
        rows.push(row);
    }
    Some(rows)
}

fn render_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(obj) => {
            for (k, x) in obj {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_value(out, x, indent + 2);
                    }
                }
            }
        }
        Value::Array(items) => {
            let shown = &items[..items.len().min(MAX_ROWS)];
            if let Some(rows) = table(shown) {
                let widths: Vec<usize> = (0..rows[0].len())
                    .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
                    .collect();
                for (i, row) in rows.iter().enumerate() {
                    let cells: Vec<String> = row
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:<w$}"))
                        .collect();
                    let _ = writeln!(out, "{pad}{}", cells.join("  ").trim_end());
                    if i == 0 {
                        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                        let _ = writeln!(out, "{pad}{}", rule.join("  "));
                    }
                }
            } else {
                for (i, x) in shown.iter().enumerate() {
                    match scalar(x) {
                        Some(s) => {
                            let _ = writeln!(out, "{pad}- {s}");
                        }
                        None => {
                            let _ = writeln!(out, "{pad}- [{i}]");
                            render_value(out, x, indent + 2);
                        }
                    }
                }
            }
            if items.len() > shown.len() {
                let _ = writeln!(out, "{pad}... {} more", items.len() - shown.len());
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

/// Human-readable form of a report, computed from its JSON.
pub fn render(report: &Value) -> String {
    let mut out = String::new();
    let get = |k: &str| report.get(k).and_then(scalar).unwrap_or_default();
    let _ = writeln!(
        out,
        "starlab {}: {} (exit {})",
        get("subcommand"),
        get("status").to_uppercase(),
        get("exitCode")
    );
    let _ = writeln!(out, "{}", get("summary"));
    let _ = writeln!(out, "\nconfig:");
    if let Some(c) = report.get("config") {
        render_value(&mut out, c, 2);
    }
    let _ = writeln!(out, "\nresults:");
    if let Some(r) = report.get("results") {
        render_value(&mut out, r, 2);
    }
    if let Some(Value::Array(log)) = report.get("commitmentLog") {
        if !log.is_empty() {
            let _ = writeln!(out, "\ncommitment log ({} entries):", log.len());
            render_value(&mut out, &Value::Array(log.clone()), 2);
        }
    }
    let _ = writeln!(out, "\ntiming: {} ms", get("timingMs"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_combines_to_the_worst() {
        assert_eq!(Status::Pass.and(Status::Inconclusive), Status::Inconclusive);
        assert_eq!(Status::Inconclusive.and(Status::Fail), Status::Fail);
        assert_eq!(Status::Pass.and(Status::Pass).exit_code(), 0);
    }

    #[test]
    fn flat_arrays_render_as_tables() {
        let v = json!({"rows": [{"axioms": "{comp}", "models": 3}, {"axioms": "{comp,dir}", "models": 0}]});
        let mut out = String::new();
        render_value(&mut out, &v, 0);
        assert!(out.contains("axioms      models"), "{out}");
        assert!(out.contains("{comp,dir}  0"), "{out}");
    }

    #[test]
    fn differences_point_at_changes() {
        let a = json!({"x": [1, 2], "timingMs": 5});
        let b = json!({"x": [1, 3], "timingMs": 9});
        assert_eq!(differences(&comparable(&a), &comparable(&b), 10), ["/x/1"]);
        assert!(differences(&comparable(&a), &comparable(&a), 10).is_empty());
    }
}
