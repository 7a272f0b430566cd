//! Run configuration: defaults, an optional TOML file, then command-line
//! overrides.

use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use latblock::evade::{DEFAULT_BLOCKING_EPSILON, DEFAULT_BUDGET};
use latblock::sl2::DEFAULT_SAMPLE_DENSITY;

/// Environment variable naming a TOML config file.
pub const CONFIG_ENV: &str = "LATBLOCK_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Tolerance for floating comparisons against exact or closed-form values.
    pub epsilon: f64,
    /// Clearance a connecting curve must keep from every candidate point.
    pub blocking_epsilon: f64,
    pub sample_density: usize,
    pub budget: usize,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-9,
            blocking_epsilon: DEFAULT_BLOCKING_EPSILON,
            sample_density: DEFAULT_SAMPLE_DENSITY,
            budget: DEFAULT_BUDGET,
            seed: 0,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Reads `path`, or the file named by [`CONFIG_ENV`], or falls back to the
    /// defaults.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let env_path = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty());
        let Some(path) = path.map(Path::to_path_buf).or(env_path.map(Into::into)) else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            bail!("epsilon must be positive, got {}", self.epsilon);
        }
        if !(self.blocking_epsilon > 0.0 && self.blocking_epsilon < 1.0) {
            bail!(
                "blocking_epsilon must lie in (0, 1), got {}",
                self.blocking_epsilon
            );
        }
        if self.sample_density < 2 {
            bail!(
                "sample_density must be at least 2, got {}",
                self.sample_density
            );
        }
        if self.budget == 0 {
            bail!("budget must be positive");
        }
        Ok(())
    }
}
