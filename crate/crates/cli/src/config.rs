//! `key = value` configuration files. Keys are the long flag names without
//! dashes; `#` starts a comment; `grid` may repeat.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{domain, CliError, CliResult};

pub const KNOWN_KEYS: &[&str] = &[
    "eta0p", "eta1p", "nbar", "tprime", "grid", "out", "check", "tol", "jobs", "which", "tmax", "steps", "level",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, Vec<String>>,
}

impl Config {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Domain(msg) => CliError::Domain(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut values: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return domain(format!("line {}: expected `key = value`", i + 1));
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return domain(format!("line {}: unknown key `{key}`", i + 1));
            }
            let entry = values.entry(key.to_string()).or_default();
            if key != "grid" && !entry.is_empty() {
                return domain(format!("line {}: duplicate key `{key}`", i + 1));
            }
            entry.push(value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).and_then(|v| v.first()).map(String::as_str)
    }

    pub fn all(&self, key: &str) -> &[String] {
        self.values.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Parses the value of `key`, if present.
    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Domain(format!("config key `{key}`: {e}"))),
        }
    }
}
