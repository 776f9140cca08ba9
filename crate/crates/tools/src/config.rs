//! Flat `key = value` configuration files.
//!
//! Keys use the long flag names (`g-min` and `g_min` are the same key), `#`
//! starts a comment. Command-line flags override file values.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Result, ToolError};

pub const KEYS: &[&str] = &[
    "model", "embedding", "sites", "g", "g-min", "g-max", "steps", "a", "seed", "out", "format", "plot", "workers",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    let key = key.trim().replace('_', "-");
    if key == "L" || key == "l" {
        return "sites".into();
    }
    key.to_ascii_lowercase()
}

impl ConfigFile {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let key = normalize(key);
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key `{key}`", n + 1));
            }
            let value = value.trim().to_string();
            if entries.insert(key.clone(), value).is_some() {
                return Err(format!("line {}: duplicate key `{key}`", n + 1));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ToolError::io(path, e))?;
        Self::parse(&text).map_err(|message| ToolError::Format {
            path: path.into(),
            message,
        })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| ToolError::usage(format!("config key `{key}`: {e}"))),
        }
    }
}
