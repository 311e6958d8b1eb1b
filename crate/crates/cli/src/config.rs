//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment. Every key a command reads is
//! echoed (with defaults filled in) into its report; keys nobody reads are
//! an error.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
    echo: Map<String, Value>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got {line:?}", i + 1)))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", i + 1)));
            }
            if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key {key:?}", i + 1)));
            }
        }
        Ok(Config { entries, echo: Map::new() })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Keys from `self` override those of `base`.
    pub fn layered_on(self, base: Config) -> Config {
        let mut entries = base.entries;
        entries.extend(self.entries);
        Config { entries, echo: Map::new() }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn take_raw(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn parsed<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
        raw.parse().map_err(|_| CliError::Config(format!("key {key:?}: cannot parse {raw:?}")))
    }

    pub fn get<T>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr + Into<Value> + Clone,
    {
        let value = match self.take_raw(key) {
            Some(raw) => Self::parsed(key, &raw)?,
            None => default,
        };
        self.echo.insert(key.to_string(), value.clone().into());
        Ok(value)
    }

    pub fn optional<T>(&mut self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr + Into<Value> + Clone,
    {
        match self.take_raw(key) {
            Some(raw) => {
                let value: T = Self::parsed(key, &raw)?;
                self.echo.insert(key.to_string(), value.clone().into());
                Ok(Some(value))
            }
            None => Ok(None),
        }
    }

    /// Comma-separated list.
    pub fn list<T>(&mut self, key: &str, default: &[T]) -> Result<Vec<T>, CliError>
    where
        T: FromStr + Into<Value> + Clone,
    {
        let values = match self.take_raw(key) {
            Some(raw) if raw.trim().is_empty() => Vec::new(),
            Some(raw) => raw.split(',').map(|s| Self::parsed(key, s.trim())).collect::<Result<Vec<T>, _>>()?,
            None => default.to_vec(),
        };
        self.echo.insert(key.to_string(), Value::Array(values.iter().cloned().map(Into::into).collect()));
        Ok(values)
    }

    /// One of `choices`, echoed as given.
    pub fn choice(&mut self, key: &str, choices: &[&str], default: &str) -> Result<String, CliError> {
        let value = self.take_raw(key).unwrap_or_else(|| default.to_string());
        if !choices.contains(&value.as_str()) {
            return Err(CliError::Config(format!("key {key:?}: {value:?} is not one of {}", choices.join(", "))));
        }
        self.echo.insert(key.to_string(), Value::String(value.clone()));
        Ok(value)
    }

    /// Records a derived value next to the consumed keys.
    pub fn echo_derived(&mut self, key: &str, value: impl Into<Value>) {
        self.echo.insert(key.to_string(), value.into());
    }

    /// Fails on any key that no getter consumed.
    pub fn finish(&self) -> Result<(), CliError> {
        match self.entries.keys().next() {
            Some(key) => Err(CliError::Config(format!("unknown key {key:?}"))),
            None => Ok(()),
        }
    }

    pub fn echo(&self) -> &Map<String, Value> {
        &self.echo
    }
}
