//! Scenario configuration: a flat JSON object whose values are numbers,
//! strings, booleans or arrays of numbers.

use std::collections::BTreeSet;
use std::path::Path;

use propertime::Vec3;
use serde_json::{Map, Value};

use crate::error::CliError;

/// Keys accepted by every scenario.
pub const COMMON_KEYS: [&str; 2] = ["scenario", "units"];

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    entries: Map<String, Value>,
}

fn schema_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl Config {
    pub fn empty() -> Self {
        Self {
            entries: Map::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| schema_error(format!("invalid JSON: {e}")))?;
        let Value::Object(entries) = value else {
            return Err(schema_error("top level must be an object"));
        };
        for (key, value) in &entries {
            let flat = match value {
                Value::Number(_) | Value::String(_) | Value::Bool(_) => true,
                Value::Array(items) => items.iter().all(Value::is_number),
                _ => false,
            };
            if !flat {
                return Err(schema_error(format!(
                    "key `{key}` must hold a number, string, boolean or array of numbers"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| schema_error(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Rejects keys outside `allowed` and [`COMMON_KEYS`], and a `scenario`
    /// entry naming a different scenario.
    pub fn validate(&self, scenario: &str, allowed: &[&str]) -> Result<(), CliError> {
        let known: BTreeSet<&str> = allowed.iter().chain(COMMON_KEYS.iter()).copied().collect();
        if let Some(key) = self.entries.keys().find(|k| !known.contains(k.as_str())) {
            return Err(schema_error(format!(
                "unknown key `{key}` for scenario `{scenario}`"
            )));
        }
        if let Some(named) = self.entries.get("scenario") {
            match named.as_str() {
                Some(s) if s.replace('_', "-") == scenario => {}
                _ => {
                    return Err(schema_error(format!(
                        "key `scenario` is {named} but the subcommand is `{scenario}`"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Rejects `key` when present, explaining why it does not apply.
    pub fn forbid(&self, key: &str, reason: &str) -> Result<(), CliError> {
        if self.has(key) {
            return Err(schema_error(format!("key `{key}` is not used {reason}")));
        }
        Ok(())
    }

    fn required(&self, key: &str) -> Result<&Value, CliError> {
        self.entries
            .get(key)
            .ok_or_else(|| schema_error(format!("missing required key `{key}`")))
    }

    pub fn number(&self, key: &str) -> Result<f64, CliError> {
        let v = self.required(key)?;
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| schema_error(format!("key `{key}` must be a finite number, got {v}")))
    }

    pub fn number_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        if self.has(key) {
            self.number(key)
        } else {
            Ok(default)
        }
    }

    pub fn positive(&self, key: &str) -> Result<f64, CliError> {
        let v = self.number(key)?;
        if !(v > 0.0) {
            return Err(schema_error(format!(
                "key `{key}` must be positive, got {v}"
            )));
        }
        Ok(v)
    }

    pub fn positive_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        if self.has(key) {
            self.positive(key)
        } else {
            Ok(default)
        }
    }

    pub fn count(&self, key: &str) -> Result<usize, CliError> {
        let v = self.required(key)?;
        v.as_u64()
            .filter(|&n| n > 0)
            .map(|n| n as usize)
            .ok_or_else(|| schema_error(format!("key `{key}` must be a positive integer, got {v}")))
    }

    pub fn seed_or(&self, key: &str, default: u64) -> Result<u64, CliError> {
        if !self.has(key) {
            return Ok(default);
        }
        let v = self.required(key)?;
        v.as_u64().ok_or_else(|| {
            schema_error(format!(
                "key `{key}` must be a non-negative integer, got {v}"
            ))
        })
    }

    pub fn count_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        if self.has(key) {
            self.count(key)
        } else {
            Ok(default)
        }
    }

    pub fn numbers(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let v = self.required(key)?;
        let items = v.as_array().ok_or_else(|| {
            schema_error(format!("key `{key}` must be an array of numbers, got {v}"))
        })?;
        items
            .iter()
            .map(|x| {
                x.as_f64()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| schema_error(format!("key `{key}` holds a non-finite entry")))
            })
            .collect()
    }

    pub fn vec3(&self, key: &str) -> Result<Vec3, CliError> {
        let items = self.numbers(key)?;
        if items.len() != 3 {
            return Err(schema_error(format!(
                "key `{key}` must hold exactly 3 numbers, got {}",
                items.len()
            )));
        }
        Ok(Vec3::new(items[0], items[1], items[2]))
    }

    pub fn vec3_or(&self, key: &str, default: Vec3) -> Result<Vec3, CliError> {
        if self.has(key) {
            self.vec3(key)
        } else {
            Ok(default)
        }
    }

    /// A string restricted to `choices`; the first choice is the default.
    pub fn choice(&self, key: &str, choices: &[&'static str]) -> Result<&'static str, CliError> {
        let Some(v) = self.entries.get(key) else {
            return Ok(choices[0]);
        };
        let s = v
            .as_str()
            .ok_or_else(|| schema_error(format!("key `{key}` must be a string, got {v}")))?;
        choices.iter().find(|c| **c == s).copied().ok_or_else(|| {
            schema_error(format!(
                "key `{key}` must be one of {choices:?}, got \"{s}\""
            ))
        })
    }

    /// Compact JSON echo for output metadata.
    pub fn echo(&self) -> String {
        Value::Object(self.entries.clone()).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nested_values_and_unknown_keys() {
        assert!(matches!(Config::parse("[1, 2]"), Err(CliError::Config(_))));
        let nested = Config::parse(r#"{"a": {"b": 1}}"#).unwrap_err();
        assert!(nested.to_string().contains("`a`"));
        let c = Config::parse(r#"{"w": [0.6, 0, 0], "speed": 2}"#).unwrap();
        let err = c.validate("redshift", &["w", "u"]).unwrap_err();
        assert!(err.to_string().contains("`speed`"));
    }

    #[test]
    fn scenario_key_must_match() {
        let c = Config::parse(r#"{"scenario": "rest_source"}"#).unwrap();
        assert!(c.validate("rest-source", &[]).is_ok());
        let err = c.validate("muon", &[]).unwrap_err();
        assert!(err.to_string().contains("`scenario`"));
    }

    #[test]
    fn typed_getters() {
        let c = Config::parse(r#"{"n": 3, "x": 1.5, "v": [1, 2, 3], "mode": "weak", "bad": -1}"#)
            .unwrap();
        assert_eq!(c.count("n").unwrap(), 3);
        assert_eq!(c.number("x").unwrap(), 1.5);
        assert_eq!(c.vec3("v").unwrap(), Vec3::new(1.0, 2.0, 3.0));
        assert_eq!(c.choice("mode", &["exact", "weak"]).unwrap(), "weak");
        assert_eq!(c.choice("other", &["exact", "weak"]).unwrap(), "exact");
        assert!(c.count("x").is_err());
        assert!(c.positive("bad").unwrap_err().to_string().contains("`bad`"));
        assert!(c
            .number("missing")
            .unwrap_err()
            .to_string()
            .contains("`missing`"));
    }
}
