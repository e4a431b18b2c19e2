//! Flat `key = value` scenario configuration.
//!
//! ```text
//! # comments start with '#'
//! oracle  = profinite:lazy:seed=7
//! horizon = 500
//! sets    = evens; {1,2 mod 5 | except +3}; cofinite {0}
//! ```
//!
//! List values are separated by `;` outside braces. Set literals use the
//! notation of `starlab::notation::parse_set`, functions that of
//! `parse_function`, oracles that of `UltrafilterHandle::from_str`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context as _, Result};
use starlab::{EpSet, EqpFunction, UltrafilterHandle};

/// Environment variable consulted for the default horizon.
pub const HORIZON_ENV: &str = "STARLAB_HORIZON";
pub const DEFAULT_HORIZON: u64 = 1000;

pub fn parse_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected `key = value`", i + 1))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

pub fn render_text(values: &BTreeMap<String, String>) -> String {
    values.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

/// Splits on `;` at brace depth 0, dropping empty items.
pub fn split_list(text: &str) -> Vec<String> {
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '{' | '(' => depth += 1,
            '}' | ')' => depth -= 1,
            ';' if depth == 0 => {
                items.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    items.push(cur);
    items
        .into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Effective parameters of one run. Every key read is recorded with the
/// value used, defaults included, and becomes the report's config echo.
#[derive(Debug, Default)]
pub struct Params {
    given: BTreeMap<String, String>,
    used: RefCell<BTreeMap<String, String>>,
}

impl Params {
    pub fn new(given: BTreeMap<String, String>) -> Self {
        Params {
            given,
            used: RefCell::default(),
        }
    }

    pub fn get(&self, key: &str, default: &str) -> String {
        let v = self
            .given
            .get(key)
            .cloned()
            .unwrap_or_else(|| default.to_string());
        self.used.borrow_mut().insert(key.to_string(), v.clone());
        v
    }

    pub fn parsed<T: FromStr>(&self, key: &str, default: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let v = self.get(key, default);
        v.parse().map_err(|e| anyhow!("`{key} = {v}`: {e}"))
    }

    pub fn oracle(&self) -> Result<UltrafilterHandle> {
        self.parsed("oracle", "profinite:int:0")
    }

    pub fn seed(&self) -> Result<u64> {
        self.parsed("seed", "0")
    }

    pub fn horizon(&self) -> Result<u64> {
        let default = match std::env::var(HORIZON_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u64>()
                .with_context(|| format!("{HORIZON_ENV}={v} is not a number"))?,
            Err(_) => DEFAULT_HORIZON,
        };
        self.parsed("horizon", &default.to_string())
    }

    pub fn sets(&self, key: &str, default: &str) -> Result<Vec<EpSet>> {
        split_list(&self.get(key, default))
            .iter()
            .map(|s| s.parse().map_err(|e| anyhow!("`{key}`: set `{s}`: {e}")))
            .collect()
    }

    pub fn functions(&self, key: &str, default: &str) -> Result<Vec<EqpFunction>> {
        split_list(&self.get(key, default))
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|e| anyhow!("`{key}`: function `{s}`: {e}"))
            })
            .collect()
    }

    /// `name = literal; ...` pairs.
    pub fn named<T: FromStr>(&self, key: &str, default: &str) -> Result<Vec<(String, T)>>
    where
        T::Err: std::fmt::Display,
    {
        split_list(&self.get(key, default))
            .iter()
            .map(|item| {
                let (name, lit) = item
                    .split_once('=')
                    .ok_or_else(|| anyhow!("`{key}`: expected `name = literal`, got `{item}`"))?;
                let value = lit
                    .trim()
                    .parse()
                    .map_err(|e| anyhow!("`{key}`: `{item}`: {e}"))?;
                Ok((name.trim().to_string(), value))
            })
            .collect()
    }

    pub fn echo(&self) -> BTreeMap<String, String> {
        self.used.borrow().clone()
    }

    /// Fails on keys that the subcommand never read.
    pub fn check_unused(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<&String> = self
            .given
            .keys()
            .filter(|k| !used.contains_key(*k))
            .collect();
        if !unknown.is_empty() {
            bail!("unknown configuration keys: {unknown:?}");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_respect_braces() {
        assert_eq!(
            split_list("evens; {0 mod 2 -> n; 1 mod 2 -> 3n+1} ;; mult 3"),
            ["evens", "{0 mod 2 -> n; 1 mod 2 -> 3n+1}", "mult 3"]
        );
    }

    #[test]
    fn text_round_trip() {
        let text = "# scenario\noracle = principal:3\n\nsets = evens; mult 3\n";
        let values = parse_text(text).unwrap();
        assert_eq!(values["sets"], "evens; mult 3");
        assert_eq!(parse_text(&render_text(&values)).unwrap(), values);
        assert!(parse_text("no equals sign").is_err());
    }

    #[test]
    fn defaults_are_echoed() {
        let p = Params::new(BTreeMap::from([("seed".to_string(), "9".to_string())]));
        assert_eq!(p.seed().unwrap(), 9);
        assert_eq!(p.get("k", "2"), "2");
        assert_eq!(p.echo()["k"], "2");
        p.check_unused().unwrap();
        let q = Params::new(BTreeMap::from([("typo".to_string(), "1".to_string())]));
        assert!(q.check_unused().is_err());
    }
}
