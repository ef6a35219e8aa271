use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use diophlab::{Config, Error};

#[derive(Serialize)]
struct Success<'a> {
    command: &'a str,
    config: &'a Config,
    result: &'a Value,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: String,
    message: String,
    exit_code: i32,
}

#[derive(Serialize)]
struct Failure<'a> {
    command: &'a str,
    config: &'a Config,
    error: ErrorBody,
}

/// Variant name of an error, e.g. `PrecisionInsufficient`.
pub fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

pub fn success(command: &str, cfg: &Config, result: &Value, pretty: bool) -> String {
    if pretty {
        let mut out = format!("{command}\n");
        summarize(&mut out, result, 1);
        return out;
    }
    json_line(&Success { command, config: cfg, result })
}

pub fn failure(command: &str, cfg: &Config, e: &Error, pretty: bool) -> String {
    if pretty {
        return format!("{command}: {} ({e})\n", error_kind(e));
    }
    json_line(&Failure { command, config: cfg, error: ErrorBody { kind: error_kind(e), message: e.to_string(), exit_code: e.exit_code() } })
}

fn json_line<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string(x).expect("output serializes");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

/// Indented `key: value` tree; short arrays of scalars stay on one line.
fn summarize(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match inline(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        summarize(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                match inline(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}[{i}] {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}[{i}]");
                        summarize(out, x, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let xs = v.as_array()?;
    if xs.len() > 24 {
        return None;
    }
    let parts = xs.iter().map(scalar).collect::<Option<Vec<_>>>()?;
    Some(format!("[{}]", parts.join(", ")))
}
