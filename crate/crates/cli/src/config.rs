//! `key = value` configuration files. Keys are the long flag names without
//! the leading dashes; command-line flags take precedence over file values.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

pub const KNOWN_KEYS: &[&str] = &[
    "format",
    "output",
    "units",
    "epsilon0",
    "c",
    "radius",
    "volume",
    "e0",
    "theta-order",
    "phi-points",
    "radial-panels",
    "radial-order",
    "n",
    "n-max",
    "tol",
    "kr",
    "omega",
    "k0",
    "radial-mode",
    "polarization",
    "samples",
    "khat",
    "profile",
];

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected `key = value`", i + 1))?;
            let key = k.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(format!("config line {}: unknown key `{key}`", i + 1));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Config { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Flag value if given, otherwise the parsed file value, otherwise `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            Some(s) => s
                .parse::<T>()
                .map(Some)
                .map_err(|e| format!("config key `{key}`: cannot parse `{s}`: {e}")),
            None => Ok(None),
        }
    }
}

/// Comma-separated list of floats.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number `{}`: {e}", p.trim()))
        })
        .collect()
}
