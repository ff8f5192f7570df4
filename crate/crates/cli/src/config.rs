//! Optional `key = value` settings file.
//!
//! One setting per line. `#` starts a comment, blank lines are skipped, keys
//! use the long flag names (`t-max`, `lambda`, ...; `_` is accepted for `-`).
//! Values use the same syntax as the flags. A key may appear once.

use std::collections::BTreeMap;
use std::path::Path;

use crate::values::{usage, UsageError};

pub const KEYS: &[&str] = &[
    "feedback", "lambda", "beta", "mu", "alpha", "t-max", "step", "start", "stop", "axis", "t", "dt",
    "method", "tol", "jobs", "analytic",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key = value", n + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            if !KEYS.contains(&key.as_str()) {
                return Err(usage(format!("config line {}: unknown key {key:?}", n + 1)));
            }
            if value.is_empty() {
                return Err(usage(format!("config line {}: empty value for {key:?}", n + 1)));
            }
            if entries.insert(key.clone(), value.to_string()).is_some() {
                return Err(usage(format!("config line {}: duplicate key {key:?}", n + 1)));
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Flag value if given, otherwise the parsed config entry.
    pub fn pick<T>(
        &self,
        flag: Option<T>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, UsageError>,
    ) -> Result<Option<T>, UsageError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self
                .get(key)
                .map(|raw| parse(raw).map_err(|e| usage(format!("config {key}: {e}"))))
                .transpose(),
        }
    }

    /// As [`Config::pick`] for flags that arrive as raw text.
    pub fn pick_str<T>(
        &self,
        flag: Option<&str>,
        key: &str,
        parse: impl Fn(&str) -> Result<T, UsageError>,
    ) -> Result<Option<T>, UsageError> {
        match flag {
            Some(raw) => parse(raw).map(Some).map_err(|e| usage(format!("--{key}: {e}"))),
            None => self.pick(None, key, parse),
        }
    }
}

pub fn parse_bool(raw: &str) -> Result<bool, UsageError> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(usage(format!("not a boolean: {raw:?}"))),
    }
}

pub fn parse_usize(raw: &str) -> Result<usize, UsageError> {
    raw.trim().parse().map_err(|_| usage(format!("not a count: {raw:?}")))
}
