//! Minimal `--key value` argument parsing for the batch CLI.

use std::collections::BTreeMap;

#[derive(Debug, Default)]
pub struct Args {
    values: BTreeMap<String, String>,
}

impl Args {
    /// Parses `--key value` pairs; a `--key` followed by another flag (or
    /// nothing) is a boolean set to "true".
    pub fn parse(argv: &[String]) -> Result<Args, String> {
        let mut values = BTreeMap::new();
        let mut i = 0;
        while i < argv.len() {
            let arg = &argv[i];
            let Some(key) = arg.strip_prefix("--") else {
                return Err(format!("unexpected positional argument {arg:?}"));
            };
            if key.is_empty() {
                return Err("empty flag name".to_string());
            }
            let next_is_value = argv
                .get(i + 1)
                .map(|v| !v.starts_with("--"))
                .unwrap_or(false);
            if next_is_value {
                values.insert(key.to_string(), argv[i + 1].clone());
                i += 2;
            } else {
                values.insert(key.to_string(), "true".to_string());
                i += 1;
            }
        }
        Ok(Args { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, String> {
        self.get(key).ok_or_else(|| format!("missing required flag --{key}"))
    }

    pub fn flag(&self, key: &str) -> bool {
        self.get(key) == Some("true")
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T, String> {
        let raw = self.require(key)?;
        raw.parse::<T>()
            .map_err(|_| format!("cannot parse --{key} value {raw:?}"))
    }

    pub fn parsed_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, String> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse::<T>()
                .map_err(|_| format!("cannot parse --{key} value {raw:?}")),
        }
    }

    /// All parsed parameters, for the run manifest.
    pub fn all(&self) -> &BTreeMap<String, String> {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(args: &[&str]) -> Vec<String> {
        args.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pairs_and_booleans() {
        let a = Args::parse(&sv(&["--kind", "SO", "--n", "2", "--scan", "--alpha", "25/64"])).unwrap();
        assert_eq!(a.get("kind"), Some("SO"));
        assert_eq!(a.parsed::<u32>("n").unwrap(), 2);
        assert!(a.flag("scan"));
        assert_eq!(a.get("alpha"), Some("25/64"));
        assert!(!a.flag("absent"));
    }

    #[test]
    fn rejects_positionals() {
        assert!(Args::parse(&sv(&["oops"])).is_err());
    }

    #[test]
    fn negative_numbers_are_values() {
        let a = Args::parse(&sv(&["--s", "-3"])).unwrap();
        assert_eq!(a.get("s"), Some("-3"));
    }
}
