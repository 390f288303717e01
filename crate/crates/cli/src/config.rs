//! Global options, merged from an optional TOML file and the command line.
//! Flags win over the file.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Keys accepted in `--config FILE`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub float: Option<bool>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub window: Option<String>,
    pub max_n: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub format: Format,
    /// `format` came from a flag or the config file rather than the default.
    pub format_explicit: bool,
    pub float: bool,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub window: Option<String>,
    pub max_n: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_parse() {
        let c: FileConfig = toml::from_str("format = \"csv\"\nfloat = true\nseed = 3\nwindow = \"0:2,-1:1\"").unwrap();
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.float, Some(true));
        assert_eq!(c.seed, Some(3));
        assert!(toml::from_str::<FileConfig>("format = \"xml\"").is_err());
    }
}
