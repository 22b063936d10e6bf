//! Flat `key = value` configuration files and the flag/file/default
//! resolution order.
//!
//! Files hold one `key = value` pair per line with `#` comments. Values from
//! the command line always win over file values, which win over defaults.
//! Unknown keys are rejected so typos cannot silently fall back to defaults.

use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

#[derive(Debug)]
pub enum ConfigError {
    Io(String),
    Parse(String),
    UnknownKey(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(m) | ConfigError::Parse(m) => write!(f, "{m}"),
            ConfigError::UnknownKey(k) => write!(f, "unknown configuration key `{k}`"),
        }
    }
}

impl FileConfig {
    pub fn load(path: &Path, allowed_keys: &[&str]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("cannot read {}: {e}", path.display())))?;
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError::Parse(format!(
                    "{}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            let key = key.trim().to_string();
            if !allowed_keys.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey(key));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| ConfigError::Parse(format!("malformed number `{v}` for key `{key}`"))),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }
}

/// Resolve one numeric option: flag, then file, then default.
pub fn resolve_f64(
    flag: Option<f64>,
    file: &FileConfig,
    key: &str,
    default: f64,
) -> Result<f64, ConfigError> {
    Ok(flag.or(file.get_f64(key)?).unwrap_or(default))
}

/// Resolve one string option.
pub fn resolve_str(flag: Option<String>, file: &FileConfig, key: &str, default: &str) -> String {
    flag.or_else(|| file.get_str(key).map(str::to_string))
        .unwrap_or_else(|| default.to_string())
}

/// A `resolved_config.txt` body from resolved key/value pairs.
pub fn resolved_snapshot(pairs: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(v);
        out.push('\n');
    }
    out
}
