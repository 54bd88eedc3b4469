//! Flat `key = value` run configuration and parameter resolution.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use resonate::{Error, Result};

/// Effective parameters of one run: command-line flags override the config
/// file, which overrides built-in defaults. Every resolved value is kept
/// for the manifest.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    pub params: BTreeMap<String, String>,
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("config line {}: expected key = value", no + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if k.is_empty() {
            return Err(Error::Usage(format!("config line {}: empty key", no + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Settings> {
        let file = match path {
            None => BTreeMap::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    Error::Usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                parse_config(&text)?
            }
        };
        Ok(Settings {
            file,
            params: BTreeMap::new(),
        })
    }

    fn file_value<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| Error::Usage(format!("config key '{key}': {e}"))),
        }
    }

    /// Flag, else config entry, else `default`.
    pub fn get<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => v,
            None => self.file_value(key)?.unwrap_or(default),
        };
        self.params.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    /// Like [`Settings::get`] for parameters that have no default.
    pub fn require<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<T>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => v,
            None => self
                .file_value(key)?
                .ok_or_else(|| Error::Usage(format!("missing required parameter --{key}")))?,
        };
        self.params.insert(key.to_string(), v.to_string());
        Ok(v)
    }

    /// Optional parameter without default; recorded as "none" when absent.
    pub fn optional<T: FromStr + Display>(
        &mut self,
        key: &str,
        flag: Option<T>,
    ) -> Result<Option<T>>
    where
        T::Err: Display,
    {
        let v = match flag {
            Some(v) => Some(v),
            None => self.file_value(key)?,
        };
        let shown = v
            .as_ref()
            .map_or_else(|| "none".to_string(), |v| v.to_string());
        self.params.insert(key.to_string(), shown);
        Ok(v)
    }

    pub fn record(&mut self, key: &str, value: impl Display) {
        self.params.insert(key.to_string(), value.to_string());
    }
}
