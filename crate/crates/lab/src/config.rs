//! Flat `key = value` scenario configuration.
//!
//! Each scenario declares its parameters with defaults. A config file and
//! `--set` pairs may only override declared keys; anything else is a usage
//! error.

use std::collections::BTreeMap;

use crate::error::{LabError, Result};

/// One declared scenario parameter.
#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub key: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

impl Param {
    pub const fn new(key: &'static str, default: &'static str, help: &'static str) -> Self {
        Self { key, default, help }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn from_params(params: &[Param]) -> Self {
        let values = params
            .iter()
            .map(|p| (p.key.to_string(), p.default.to_string()))
            .collect();
        Self { values }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = value.trim().to_string();
                Ok(())
            }
            None => Err(LabError::Config(format!("unknown key `{key}`"))),
        }
    }

    /// Applies a `key=value` string as given on the command line.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| LabError::Config(format!("expected key=value, got `{pair}`")))?;
        self.set(k, v)
    }

    /// Applies every assignment in a config file body. `#` starts a comment.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            self.set_pair(line)
                .map_err(|e| LabError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn text(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| LabError::Config(format!("scenario has no key `{key}`")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        parse_f64(key, self.text(key)?)
    }

    pub fn positive(&self, key: &str) -> Result<f64> {
        let v = self.f64(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(bad(key, "must be positive"))
        }
    }

    pub fn u32(&self, key: &str) -> Result<u32> {
        let raw = self.text(key)?;
        raw.parse()
            .map_err(|_| bad(key, &format!("`{raw}` is not a nonnegative integer")))
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let list: Vec<f64> = split_list(self.text(key)?)
            .map(|s| parse_f64(key, s))
            .collect::<Result<_>>()?;
        if list.is_empty() {
            return Err(bad(key, "list is empty"));
        }
        Ok(list)
    }

    pub fn u32_list(&self, key: &str) -> Result<Vec<u32>> {
        let list: Vec<u32> = split_list(self.text(key)?)
            .map(|s| {
                s.parse::<u32>()
                    .map_err(|_| bad(key, &format!("`{s}` is not a nonnegative integer")))
            })
            .collect::<Result<_>>()?;
        if list.is_empty() {
            return Err(bad(key, "list is empty"));
        }
        Ok(list)
    }

    /// Inclusive arithmetic range `min, min+step, …, ≤ max`, with each point
    /// computed as `min + i·step` so repeated runs give identical values.
    pub fn range(&self, min_key: &str, max_key: &str, step_key: &str) -> Result<Vec<f64>> {
        let lo = self.f64(min_key)?;
        let hi = self.f64(max_key)?;
        let step = self.positive(step_key)?;
        if hi < lo {
            return Err(bad(max_key, "range is empty"));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(bad(step_key, "too many range points"));
        }
        Ok((0..count).map(|i| lo + i as f64 * step).collect())
    }
}

fn split_list(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_f64(key: &str, raw: &str) -> Result<f64> {
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(bad(key, &format!("`{raw}` is not a finite number"))),
    }
}

fn bad(key: &str, why: &str) -> LabError {
    LabError::Config(format!("`{key}`: {why}"))
}
