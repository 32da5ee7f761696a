//! Defaults, optionally overridden by a TOML file.

use std::path::Path;

use anyhow::{bail, Context};
use clap::ValueEnum;
use serde::Deserialize;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "PLUMBING_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
}

/// ```toml
/// max_h = 64          # refuse graphs with |H| above this unless --max-h
/// corpus_seed = 7     # seed for `verify --random`
/// corpus_size = 25    # graphs drawn by `verify --random`
/// format = "table"    # or "json"
/// verbosity = 0       # 1 prints timings to stderr
/// ```
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub max_h: u64,
    pub corpus_seed: u64,
    pub corpus_size: usize,
    pub format: Format,
    pub verbosity: u8,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_h: 64,
            corpus_seed: 7,
            corpus_size: 25,
            format: Format::Table,
            verbosity: 0,
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Config = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.max_h == 0 {
            bail!("max_h must be positive");
        }
        if self.corpus_size == 0 {
            bail!("corpus_size must be positive");
        }
        Ok(())
    }
}
