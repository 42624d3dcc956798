#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_serrehom"));
    c.env_remove(serrehom_cli::PREC_ENV);
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

pub fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

pub fn module(name: &str) -> String {
    root().join("modules").join(name).to_string_lossy().into_owned()
}

pub fn schema(command: &str) -> Value {
    let path = root().join("schemas").join(format!("{command}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).expect("schema parses")
}

fn type_matches(name: &str, v: &Value) -> bool {
    match name {
        "null" => v.is_null(),
        "boolean" => v.is_boolean(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "string" => v.is_string(),
        "array" => v.is_array(),
        "object" => v.is_object(),
        _ => false,
    }
}

/// Checks `v` against the keywords the shipped schemas use:
/// `type`, `const`, `enum`, `anyOf`, `properties`, `required`,
/// `additionalProperties: false`, `items`, `minItems`, `maxItems`, `minimum`.
pub fn validate(schema: &Value, v: &Value, path: &str) -> Result<(), String> {
    let err = |msg: String| Err(format!("{path}: {msg}"));
    if let Some(t) = schema.get("type") {
        let ok = match t {
            Value::String(s) => type_matches(s, v),
            Value::Array(ts) => ts.iter().any(|s| s.as_str().is_some_and(|s| type_matches(s, v))),
            _ => return err("bad 'type'".into()),
        };
        if !ok {
            return err(format!("expected type {t}, got {v}"));
        }
    }
    if let Some(c) = schema.get("const") {
        if c != v {
            return err(format!("expected {c}, got {v}"));
        }
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        if !options.contains(v) {
            return err(format!("{v} not in {options:?}"));
        }
    }
    if let Some(Value::Array(alts)) = schema.get("anyOf") {
        if !alts.iter().any(|s| validate(s, v, path).is_ok()) {
            return err(format!("{v} matches no alternative"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            return err(format!("{x} < {min}"));
        }
    }
    if let Value::Object(map) = v {
        let props = schema.get("properties").and_then(Value::as_object);
        for r in schema.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = r.as_str().expect("required names are strings");
            if !map.contains_key(key) {
                return err(format!("missing '{key}'"));
            }
        }
        for (k, x) in map {
            match props.and_then(|p| p.get(k)) {
                Some(s) => validate(s, x, &format!("{path}.{k}"))?,
                None if schema.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return err(format!("unexpected '{k}'"));
                }
                None => {}
            }
        }
    }
    if let Value::Array(items) = v {
        let len = items.len() as u64;
        if schema.get("minItems").and_then(Value::as_u64).is_some_and(|m| len < m) {
            return err(format!("too few items ({len})"));
        }
        if schema.get("maxItems").and_then(Value::as_u64).is_some_and(|m| len > m) {
            return err(format!("too many items ({len})"));
        }
        if let Some(s) = schema.get("items") {
            for (i, x) in items.iter().enumerate() {
                validate(s, x, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

pub fn assert_valid(command: &str, v: &Value) {
    if let Err(e) = validate(&schema(command), v, "$") {
        panic!("{command} output does not match its schema: {e}\n{v:#}");
    }
}
