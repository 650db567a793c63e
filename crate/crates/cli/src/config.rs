//! Flat `key=value` config files. Keys are flag names without the leading
//! dashes; `#` starts a comment line.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parses config text into `(key, value)` pairs in file order.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| ConfigError { line: idx + 1, message: message.to_string() };
        let (key, value) = line.split_once('=').ok_or_else(|| err("expected key=value"))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(err("empty key"));
        }
        if key == "config" {
            return Err(err("config files cannot include other config files"));
        }
        entries.push((key.to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

/// Renders entries as `--key=value` arguments.
pub fn to_flags(entries: &[(String, String)]) -> Vec<String> {
    entries.iter().map(|(k, v)| format!("--{k}={v}")).collect()
}
