//! Flat JSON experiment configuration with dotted keys.
//!
//! Every key an experiment reads is claimed through [`Keys`]; whatever is
//! left unclaimed afterwards is rejected, so typos never fall back to a
//! default silently.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::Value;

use crate::experiments::Experiment;

#[derive(Debug, Clone)]
pub struct Config {
    pub experiment: Experiment,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Experiment parameters, keyed by dotted name.
    pub params: BTreeMap<String, Value>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).context("config is not valid JSON")?;
        let Value::Object(map) = value else {
            bail!("config must be a JSON object");
        };
        let mut params: BTreeMap<String, Value> = map.into_iter().collect();
        let name = params
            .remove("experiment")
            .ok_or_else(|| anyhow!("missing key `experiment`"))?;
        let name = name.as_str().ok_or_else(|| anyhow!("key `experiment`: expected a string"))?;
        let experiment = Experiment::from_name(name)?;
        let seed = match params.remove("seed") {
            None => 0,
            Some(v) => v.as_u64().ok_or_else(|| anyhow!("key `seed`: expected a non-negative integer"))?,
        };
        let from_file = match params.remove("output_dir") {
            None => None,
            Some(v) => Some(PathBuf::from(v.as_str().ok_or_else(|| anyhow!("key `output_dir`: expected a string"))?)),
        };
        let output_dir = match std::env::var_os("OUTPUT_DIR") {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => from_file.unwrap_or_else(|| PathBuf::from(format!("out/{}", experiment.name()))),
        };
        for key in params.keys() {
            if key.is_empty() || key.split('.').any(str::is_empty) {
                bail!("key `{key}`: malformed dotted name");
            }
        }
        Ok(Self { experiment, seed, output_dir, params })
    }

    pub fn keys(&self) -> Keys<'_> {
        Keys { params: &self.params, claimed: BTreeMap::new() }
    }
}

/// Typed accessor that records which keys were read and the value used.
pub struct Keys<'a> {
    params: &'a BTreeMap<String, Value>,
    claimed: BTreeMap<String, Value>,
}

impl Keys<'_> {
    fn take(&mut self, key: &str, default: Value) -> Value {
        let v = self.params.get(key).cloned().unwrap_or(default);
        self.claimed.insert(key.to_string(), v.clone());
        v
    }

    pub fn f64(&mut self, key: &str, default: f64) -> Result<f64> {
        let v = self.take(key, Value::from(default));
        let x = v.as_f64().ok_or_else(|| anyhow!("key `{key}`: expected a number, got {v}"))?;
        if !x.is_finite() {
            bail!("key `{key}`: must be finite");
        }
        Ok(x)
    }

    pub fn positive(&mut self, key: &str, default: f64) -> Result<f64> {
        let x = self.f64(key, default)?;
        if !(x > 0.0) {
            bail!("key `{key}`: must be positive, got {x}");
        }
        Ok(x)
    }

    pub fn usize(&mut self, key: &str, default: usize) -> Result<usize> {
        let v = self.take(key, Value::from(default));
        let x = v.as_u64().ok_or_else(|| anyhow!("key `{key}`: expected a non-negative integer, got {v}"))?;
        usize::try_from(x).with_context(|| format!("key `{key}`: out of range"))
    }

    pub fn string(&mut self, key: &str, default: &str) -> Result<String> {
        let v = self.take(key, Value::from(default));
        v.as_str().map(str::to_string).ok_or_else(|| anyhow!("key `{key}`: expected a string, got {v}"))
    }

    pub fn f64_list(&mut self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        let v = self.take(key, Value::from(default.to_vec()));
        let items = v.as_array().ok_or_else(|| anyhow!("key `{key}`: expected an array of numbers"))?;
        items
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| anyhow!("key `{key}`: expected numbers, got {x}")))
            .collect()
    }

    pub fn pair_list(&mut self, key: &str, default: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
        let dv: Vec<Value> = default.iter().map(|(a, b)| Value::from(vec![*a, *b])).collect();
        let v = self.take(key, Value::from(dv));
        let bad = || anyhow!("key `{key}`: expected an array of [x, y] pairs");
        v.as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|pair| match pair.as_array().map(Vec::as_slice) {
                Some([a, b]) => Ok((a.as_f64().ok_or_else(bad)?, b.as_f64().ok_or_else(bad)?)),
                _ => Err(bad()),
            })
            .collect()
    }

    /// Rejects unread keys and returns the effective parameter set.
    pub fn finish(self) -> Result<BTreeMap<String, Value>> {
        let unknown: Vec<&String> = self.params.keys().filter(|k| !self.claimed.contains_key(*k)).collect();
        if !unknown.is_empty() {
            let names: Vec<String> = unknown.iter().map(|k| format!("`{k}`")).collect();
            let valid: Vec<&String> = self.claimed.keys().collect();
            bail!("unknown key(s) {}; valid keys: {valid:?}", names.join(", "));
        }
        Ok(self.claimed)
    }
}
