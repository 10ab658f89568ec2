use std::fmt::Display;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Exit 2: bad arguments, unreadable files, malformed JSON.
    Usage(String),
    /// Exit 1: a module refused the input.
    Domain { message: String, detail: Value },
}

impl CliError {
    pub fn domain<E: Serialize + Display>(e: E) -> Self {
        let detail = serde_json::to_value(&e).unwrap_or(Value::Null);
        CliError::Domain { message: e.to_string(), detail }
    }

    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        match self {
            CliError::Usage(message) => {
                json!({"schema": SCHEMA, "command": command, "error": {"error": "usage", "message": message}})
            }
            CliError::Domain { message, detail } => {
                json!({"schema": SCHEMA, "command": command, "error": detail, "message": message})
            }
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Reads a canonical encoding, or a report whose `result` holds one.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: malformed JSON: {e}", path.display())))?;
    let value = match value {
        Value::Object(mut map) if map.contains_key("schema") && map.contains_key("result") => {
            map.remove("result").unwrap()
        }
        v => v,
    };
    serde_json::from_value(value).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("encodings are plain JSON");
    fs::write(path, text + "\n").map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// One JSON document per line.
pub fn write_lines<T: Serialize>(path: &Path, items: &[T]) -> CliResult<()> {
    let mut text = String::new();
    for item in items {
        text.push_str(&serde_json::to_string(item).expect("encodings are plain JSON"));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn report<T: Serialize>(command: &str, result: &T) -> Value {
    json!({"schema": SCHEMA, "command": command, "result": result})
}

pub fn parse_bits(s: &str) -> CliResult<randlab::BitString> {
    s.parse().map_err(|e| CliError::Usage(format!("{s:?}: {e}")))
}
