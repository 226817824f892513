//! Optional `key = value` config file. Every key mirrors a flag; flags win.

use std::path::{Path, PathBuf};

use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub json: Option<bool>,
    #[serde(default)]
    pub prime: Vec<u64>,
    pub factor_budget: Option<u64>,
    pub dump_w: Option<PathBuf>,
    pub dump_what: Option<PathBuf>,
    pub hat_prime: Option<u64>,
    pub dedup: Option<bool>,
    pub jobs: Option<usize>,
    pub allow_n8: Option<bool>,
    pub out: Option<PathBuf>,
    pub pairs: Option<PathBuf>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.message().to_string())
    }
}
