use std::path::Path;

use serde::Deserialize;

use crate::CliError;

/// Settings read from an optional TOML file; command-line flags win.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub node_limit: u64,
    pub window: i64,
    pub oracle: OracleBounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleBounds {
    pub max_n: usize,
    pub max_entry: u64,
    pub max_d: i64,
}

impl Default for Config {
    fn default() -> Self {
        Config { node_limit: 5_000_000, window: 6, oracle: OracleBounds::default() }
    }
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { max_n: 4, max_entry: 6, max_d: 8 }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_files_keep_defaults() {
        let c = Config::parse("window = 3\n[oracle]\nmax_d = 5\n").unwrap();
        assert_eq!(c.window, 3);
        assert_eq!(c.oracle.max_d, 5);
        assert_eq!(c.oracle.max_entry, 6);
        assert_eq!(c.node_limit, 5_000_000);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(Config::parse("windows = 3"), Err(CliError::Usage(_))));
    }
}
