//! Schema-checked access to `key = value` problem and initial-condition files.

use std::collections::BTreeMap;

use elastica::io::{parse_key_values, parse_point};
use elastica::Point;

use crate::Failure;

pub struct Record {
    map: BTreeMap<String, String>,
}

impl Record {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        Ok(Self { map: parse_key_values(text)? })
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn take<T>(&mut self, key: &str, parse: impl FnOnce(&str) -> Result<T, String>) -> Result<Option<T>, Failure> {
        match self.map.remove(key) {
            None => Ok(None),
            Some(v) => parse(&v).map(Some).map_err(|e| Failure::Input(format!("key `{key}`: {e}"))),
        }
    }

    pub fn f64(&mut self, key: &str) -> Result<Option<f64>, Failure> {
        self.take(key, |v| {
            let x: f64 = v.parse().map_err(|e| format!("`{v}`: {e}"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("`{v}` is not finite"))
            }
        })
    }

    pub fn usize(&mut self, key: &str) -> Result<Option<usize>, Failure> {
        self.take(key, |v| v.parse().map_err(|e| format!("`{v}`: {e}")))
    }

    pub fn u64(&mut self, key: &str) -> Result<Option<u64>, Failure> {
        self.take(key, |v| v.parse().map_err(|e| format!("`{v}`: {e}")))
    }

    pub fn bool(&mut self, key: &str) -> Result<Option<bool>, Failure> {
        self.take(key, |v| v.parse().map_err(|e| format!("`{v}`: {e}")))
    }

    pub fn string(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    /// A 2- or 3-vector with its dimension.
    pub fn point(&mut self, key: &str) -> Result<Option<(Point, usize)>, Failure> {
        self.take(key, |v| parse_point(v).map_err(|e| e.to_string()))
    }

    pub fn require<T>(value: Option<T>, key: &str) -> Result<T, Failure> {
        value.ok_or_else(|| Failure::Input(format!("missing key `{key}`")))
    }

    /// Errors on any key that was not consumed.
    pub fn finish(self) -> Result<(), Failure> {
        if self.map.is_empty() {
            Ok(())
        } else {
            let keys: Vec<&str> = self.map.keys().map(String::as_str).collect();
            Err(Failure::Input(format!("unknown keys: {}", keys.join(", "))))
        }
    }
}
