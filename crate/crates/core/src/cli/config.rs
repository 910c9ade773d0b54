use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Keys `ftrl` accepts in a config file.
pub const KNOWN_KEYS: [&str; 17] = [
    "learner", "learners", "stream", "T", "seed", "R", "G", "R_inf", "G_inf", "lambda", "bound",
    "output", "n", "eta", "set", "data", "active",
];

/// Flat `key = value` configuration. `#` starts a comment; blank lines are
/// ignored; keys are case-sensitive and may appear once.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |column: usize, message: String| Error::Parse {
                line: k + 1,
                column,
                message,
            };
            let Some(eq) = line.find('=') else {
                return Err(parse_err(1, format!("expected 'key = value', got '{line}'")));
            };
            let key = line[..eq].trim();
            let value = line[eq + 1..].trim();
            let column = raw.find(key).map_or(1, |c| c + 1);
            if key.is_empty() || value.is_empty() {
                return Err(parse_err(column, "empty key or value".into()));
            }
            if !KNOWN_KEYS.contains(&key) {
                return Err(parse_err(column, format!("unknown key '{key}'")));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(parse_err(column, format!("duplicate key '{key}'")));
            }
        }
        Ok(Config { entries })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Parses `key` as `T`, or returns `default` when absent.
    pub fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("cannot parse {key} = '{v}'"))),
        }
    }

    pub fn parsed_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::InvalidArgument(format!("cannot parse {key} = '{v}'")))
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let c = Config::parse("learner = dual-averaging\n# comment\n\nT=100  # rounds\nR = 2.5\n").unwrap();
        assert_eq!(c.get("learner"), Some("dual-averaging"));
        assert_eq!(c.parsed::<usize>("T", 0).unwrap(), 100);
        assert_eq!(c.parsed::<f64>("R", 1.0).unwrap(), 2.5);
        assert_eq!(c.parsed::<f64>("G", 1.0).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(Config::parse("learner"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Config::parse("T = 1\ncolour = red"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Config::parse("T = 1\nT = 2"), Err(Error::Parse { line: 2, .. })));
        assert!(Config::parse("T = x").unwrap().parsed::<usize>("T", 0).is_err());
    }
}
