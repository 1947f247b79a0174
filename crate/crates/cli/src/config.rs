//! `key=value` settings files.
//!
//! Blank lines and lines starting with `#` are skipped. Keys may use `-` or
//! `_`. Repeating a key or using an unknown key is an error.

use thiserror::Error;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub node_budget: Option<u64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {0}: expected key=value")]
    Syntax(usize),
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key {key:?} set twice")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: bad value for {key:?}")]
    Value { line: usize, key: String },
}

pub fn parse(text: &str) -> Result<Config, ConfigError> {
    let mut cfg = Config::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax(line_no))?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let bad = || ConfigError::Value {
            line: line_no,
            key: key.clone(),
        };
        let dup = || ConfigError::Duplicate {
            line: line_no,
            key: key.clone(),
        };
        match key.as_str() {
            "seed" => set(&mut cfg.seed, value.parse().map_err(|_| bad())?).ok_or_else(dup)?,
            "workers" => {
                set(&mut cfg.workers, value.parse().map_err(|_| bad())?).ok_or_else(dup)?
            }
            "node_budget" => {
                set(&mut cfg.node_budget, value.parse().map_err(|_| bad())?).ok_or_else(dup)?
            }
            _ => return Err(ConfigError::UnknownKey { line: line_no, key }),
        }
    }
    Ok(cfg)
}

fn set<T>(slot: &mut Option<T>, v: T) -> Option<()> {
    if slot.is_some() {
        return None;
    }
    *slot = Some(v);
    Some(())
}
