//! Run configuration: a flat TOML document with a `[provider]` table.
//! Unknown keys are rejected; credentials come only from the environment
//! variable named by `provider.api_key_env`. Relative paths are resolved
//! against the config file's directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::HarnessError;
use crate::llm::{CompletionParams, HttpProvider, Provider, ReplayProvider};
use crate::prompts::PromptStrategy;

fn default_concurrency() -> usize {
    4
}

fn default_max_tokens() -> u32 {
    1024
}

fn default_retries() -> u32 {
    3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    Http,
    Replay,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderConfig {
    pub kind: ProviderKind,
    pub model: String,
    #[serde(default)]
    pub url: Option<String>,
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default)]
    pub replay_path: Option<PathBuf>,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_tokens")]
    pub max_output_tokens: u32,
    #[serde(default)]
    pub seed: Option<i64>,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub datasets: Vec<PathBuf>,
    pub languages: Vec<String>,
    pub strategies: Vec<PromptStrategy>,
    pub lexicon_dir: PathBuf,
    pub provider: ProviderConfig,
    pub out_dir: PathBuf,
    #[serde(default = "default_concurrency")]
    pub max_concurrency: usize,
    #[serde(default)]
    pub sample_n: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn resolve(base: &Path, path: &mut PathBuf) {
    if path.is_relative() {
        *path = base.join(&path);
    }
}

impl RunConfig {
    /// Parse a config file and resolve its relative paths against the file's
    /// directory.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let content = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut config: RunConfig =
            toml::from_str(&content).map_err(|e| HarnessError::Config {
                detail: format!("{}: {e}", path.display()),
            })?;
        config.validate()?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        for dataset in &mut config.datasets {
            resolve(base, dataset);
        }
        resolve(base, &mut config.lexicon_dir);
        resolve(base, &mut config.out_dir);
        if let Some(replay) = &mut config.provider.replay_path {
            resolve(base, replay);
        }
        Ok(config)
    }

    fn validate(&self) -> Result<(), HarnessError> {
        let fail = |detail: String| Err(HarnessError::Config { detail });
        if self.datasets.is_empty() {
            return fail("datasets must be non-empty".into());
        }
        if self.languages.is_empty() {
            return fail("languages must be non-empty".into());
        }
        if self.strategies.is_empty() {
            return fail("strategies must be non-empty".into());
        }
        match self.provider.kind {
            ProviderKind::Http if self.provider.url.is_none() => {
                fail("provider.kind = \"http\" requires provider.url".into())
            }
            ProviderKind::Replay if self.provider.replay_path.is_none() => {
                fail("provider.kind = \"replay\" requires provider.replay_path".into())
            }
            _ => Ok(()),
        }
    }

    pub fn completion_params(&self) -> CompletionParams {
        CompletionParams {
            model: self.provider.model.clone(),
            temperature: self.provider.temperature,
            max_output_tokens: self.provider.max_output_tokens,
            seed: self.provider.seed,
        }
    }

    pub fn build_provider(&self) -> Result<Box<dyn Provider>, HarnessError> {
        match self.provider.kind {
            ProviderKind::Http => {
                let url = self.provider.url.as_deref().expect("validated");
                Ok(Box::new(HttpProvider::new(
                    url,
                    self.provider.api_key_env.as_deref(),
                    self.provider.max_retries,
                )?))
            }
            ProviderKind::Replay => {
                let path = self.provider.replay_path.as_deref().expect("validated");
                Ok(Box::new(ReplayProvider::load(path)?))
            }
        }
    }
}
