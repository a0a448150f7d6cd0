//! Deterministic report rendering.
//!
//! Objects keep insertion order and every float is written with 17
//! significant digits, so equal inputs give byte-identical reports.

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Outcome of a job, mapped onto the process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    True,
    False,
    Invalid,
    Indeterminate,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::True => 0,
            Status::False => 1,
            Status::Invalid => 2,
            Status::Indeterminate => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::True => "true",
            Status::False => "false",
            Status::Invalid => "invalid",
            Status::Indeterminate => "indeterminate",
        }
    }

    pub fn from_bool(b: bool) -> Status {
        if b {
            Status::True
        } else {
            Status::False
        }
    }
}

pub fn payload_hash(payload: &[u8]) -> String {
    hex::encode(Sha256::digest(payload))
}

/// Wraps a command result in the common envelope.
pub fn envelope(command: &str, payload: &[u8], status: Status, key: &str, body: Value) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("command".into(), Value::from(command));
    map.insert("version".into(), Value::from(fractspec_core::VERSION));
    map.insert("payload_sha256".into(), Value::from(payload_hash(payload)));
    map.insert("status".into(), Value::from(status.label()));
    map.insert(key.into(), body);
    Value::Object(map)
}

pub fn render(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Null | Value::Bool(_) | Value::String(_) => {
            out.push_str(&serde_json::to_string(value).expect("scalar serializes"));
        }
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => out.push_str(&i.to_string()),
            (None, Some(u), _) => out.push_str(&u.to_string()),
            (None, None, Some(f)) => out.push_str(&format!("{f:.16e}")),
            _ => out.push_str(&n.to_string()),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, depth + 1);
                write_value(out, item, depth + 1);
            }
            newline(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push_str(": ");
                write_value(out, v, depth + 1);
            }
            newline(out, depth);
            out.push('}');
        }
    }
}

fn newline(out: &mut String, depth: usize) {
    out.push('\n');
    for _ in 0..depth {
        out.push_str("  ");
    }
}
