//! Provider-agnostic completions with a write-through response cache.
//!
//! A [`Provider`] turns prompt text into model text: over HTTP against any
//! chat-completions endpoint, or offline from a replay store keyed by prompt
//! digest. [`LlmClient`] wraps a provider with an append-only JSONL cache so
//! identical requests are answered once.

mod cache;
mod http;
mod replay;

pub use cache::ResponseCache;
pub use http::HttpProvider;
pub use replay::{replay_records_to_jsonl, ReplayProvider, ReplayRecord};

use std::io;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::prompts::Prompt;

/// Decoding settings for one completion request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionParams {
    pub model: String,
    pub temperature: f64,
    pub max_output_tokens: u32,
    pub seed: Option<i64>,
}

impl CompletionParams {
    /// Deterministic defaults: temperature 0, 1024 output tokens, no seed.
    pub fn new(model: impl Into<String>) -> Self {
        CompletionParams {
            model: model.into(),
            temperature: 0.0,
            max_output_tokens: 1024,
            seed: None,
        }
    }
}

/// One provider answer, byte-exact as received.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelResponse {
    pub raw_text: String,
    pub provider_id: String,
    pub cached: bool,
    pub latency_ms: u64,
}

pub trait Provider: Send + Sync {
    /// Stable identifier mixed into cache keys.
    fn id(&self) -> &str;

    /// Fetch a completion from the origin.
    fn fetch(&self, prompt_text: &str, params: &CompletionParams) -> Result<String, LlmError>;

    /// Providers that answer instantly and identically on every call report
    /// zero latency so downstream records stay byte-stable.
    fn deterministic(&self) -> bool {
        false
    }
}

/// Collision-resistant digest identifying one (provider, params, prompt)
/// request; stable across runs and platforms.
pub fn cache_key(provider_id: &str, params: &CompletionParams, prompt_text: &str) -> String {
    let seed = params.seed.map(|s| s.to_string()).unwrap_or_default();
    let canonical = format!(
        "{}\n{}\n{}\n{}\n{}\n{}",
        provider_id,
        params.model,
        params.temperature,
        params.max_output_tokens,
        seed,
        prompt_text
    );
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// A provider plus an optional write-through cache.
pub struct LlmClient {
    provider: Box<dyn Provider>,
    cache: Option<ResponseCache>,
}

impl LlmClient {
    pub fn new(provider: Box<dyn Provider>, cache: Option<ResponseCache>) -> Self {
        LlmClient { provider, cache }
    }

    pub fn provider_id(&self) -> &str {
        self.provider.id()
    }

    /// Complete a prompt, consulting the cache first and writing through on
    /// miss. Safe to call from concurrent threads.
    pub fn complete(
        &self,
        prompt: &Prompt,
        params: &CompletionParams,
    ) -> Result<ModelResponse, LlmError> {
        let key = cache_key(self.provider.id(), params, &prompt.text);
        if let Some(cache) = &self.cache {
            if let Some(raw_text) = cache.get(&key) {
                return Ok(ModelResponse {
                    raw_text,
                    provider_id: self.provider.id().to_string(),
                    cached: true,
                    latency_ms: 0,
                });
            }
        }
        let started = Instant::now();
        let raw_text = self.provider.fetch(&prompt.text, params)?;
        let latency_ms = if self.provider.deterministic() {
            0
        } else {
            started.elapsed().as_millis() as u64
        };
        if let Some(cache) = &self.cache {
            cache.put(&key, &raw_text, self.provider.id(), &params.model)?;
        }
        Ok(ModelResponse {
            raw_text,
            provider_id: self.provider.id().to_string(),
            cached: false,
            latency_ms,
        })
    }
}

#[derive(Debug, Error)]
pub enum LlmError {
    #[error("replay store has no response for key {key}")]
    ReplayMiss { key: String },
    #[error("transport failure after {attempts} attempt(s): {detail}")]
    Transport { attempts: u32, detail: String },
    #[error("provider returned status {status}: {detail}")]
    Provider { status: u16, detail: String },
    #[error("malformed provider response: {detail}")]
    MalformedResponse { detail: String },
    #[error("environment variable {variable} is not set")]
    MissingApiKey { variable: String },
    #[error("cache failure: {detail}")]
    Cache { detail: String },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}
