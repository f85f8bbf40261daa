use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parsed `key = value` pairs. Keys must all be consumed with
/// [`KeyValues::take`]; [`KeyValues::finish`] rejects leftovers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

/// One `key = value` per line; blank lines and `#` comments are ignored.
pub fn parse_key_values(text: &str) -> Result<KeyValues> {
    let mut entries = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::InvalidInput(format!("config line {}: expected key = value", n + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::InvalidInput(format!("config line {}: empty key or value", n + 1)));
        }
        if entries.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::InvalidInput(format!("config line {}: duplicate key {k}", n + 1)));
        }
    }
    Ok(KeyValues { entries })
}

impl KeyValues {
    /// Remove and parse `key`, falling back to `default` when absent.
    pub fn take<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        match self.entries.remove(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::InvalidInput(format!("config key {key}: cannot parse {v:?}"))),
        }
    }

    pub fn finish(self) -> Result<()> {
        match self.entries.keys().next() {
            Some(k) => Err(Error::InvalidInput(format!("unknown config key {k}"))),
            None => Ok(()),
        }
    }
}
