//! Pipeline settings, loadable from TOML.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complete::{CompletionConfig, RetagThresholds};
use crate::score::Score;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config: {0}")]
    Range(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Limits evidence to sentences within this many ids of the sentence
    /// being processed. `None` uses the whole document.
    pub window: Option<u32>,
    /// Weight of synonym matches when scoring candidate parses.
    pub similar_discount: Score,
    /// Occurrences a lemma needs before its dominant tag is trusted.
    pub retag_min_count: usize,
    /// Share of occurrences the dominant tag needs.
    pub retag_pos_ratio: Score,
    /// Join leftover fragments by heuristics.
    pub fallback: bool,
    /// Sample areas per window size in window-rate analysis.
    pub samples_per_window: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            window: None,
            similar_discount: Score::new(1, 2),
            retag_min_count: 3,
            retag_pos_ratio: Score::new(4, 5),
            fallback: true,
            samples_per_window: 8,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.similar_discount > Score::ONE {
            return Err(ConfigError::Range(format!(
                "similar_discount must lie in [0, 1], got {}",
                self.similar_discount
            )));
        }
        if self.retag_pos_ratio.is_zero() || self.retag_pos_ratio > Score::ONE {
            return Err(ConfigError::Range(format!(
                "retag_pos_ratio must lie in (0, 1], got {}",
                self.retag_pos_ratio
            )));
        }
        if self.retag_min_count == 0 {
            return Err(ConfigError::Range("retag_min_count must be positive".into()));
        }
        if self.samples_per_window == 0 {
            return Err(ConfigError::Range("samples_per_window must be positive".into()));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<PipelineConfig, ConfigError> {
        let config: PipelineConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<PipelineConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        PipelineConfig::from_toml(&text)
    }

    pub fn completion(&self) -> CompletionConfig {
        CompletionConfig {
            thresholds: RetagThresholds {
                min_count: self.retag_min_count,
                pos_ratio: self.retag_pos_ratio,
            },
            fallback: self.fallback,
        }
    }
}
