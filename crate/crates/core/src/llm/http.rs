//! Blocking chat-completions HTTP provider with retry and backoff.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{CompletionParams, LlmError, Provider};

const DEFAULT_TIMEOUT: Duration = Duration::from_secs(120);
const BASE_BACKOFF: Duration = Duration::from_millis(250);

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [ChatMessage<'a>; 1],
    temperature: f64,
    max_tokens: u32,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatChoiceMessage,
}

#[derive(Deserialize)]
struct ChatChoiceMessage {
    content: String,
}

/// Talks to any chat-completions-style endpoint. The credential is read from
/// the environment variable named at construction, never from config files.
pub struct HttpProvider {
    id: String,
    url: String,
    api_key: Option<String>,
    client: reqwest::blocking::Client,
    max_retries: u32,
    base_backoff: Duration,
}

impl HttpProvider {
    pub fn new(
        url: &str,
        api_key_env: Option<&str>,
        max_retries: u32,
    ) -> Result<Self, LlmError> {
        let api_key = match api_key_env {
            Some(variable) => Some(std::env::var(variable).map_err(|_| {
                LlmError::MissingApiKey {
                    variable: variable.to_string(),
                }
            })?),
            None => None,
        };
        let client = reqwest::blocking::Client::builder()
            .timeout(DEFAULT_TIMEOUT)
            .build()
            .map_err(|e| LlmError::Transport {
                attempts: 0,
                detail: e.to_string(),
            })?;
        Ok(HttpProvider {
            id: format!("http:{url}"),
            url: url.to_string(),
            api_key,
            client,
            max_retries,
            base_backoff: BASE_BACKOFF,
        })
    }

    #[cfg(test)]
    pub(crate) fn with_backoff(mut self, backoff: Duration) -> Self {
        self.base_backoff = backoff;
        self
    }

    fn send_once(
        &self,
        prompt_text: &str,
        params: &CompletionParams,
    ) -> Result<String, Outcome> {
        let body = ChatRequest {
            model: &params.model,
            messages: [ChatMessage {
                role: "user",
                content: prompt_text,
            }],
            temperature: params.temperature,
            max_tokens: params.max_output_tokens,
        };
        let mut request = self.client.post(&self.url).json(&body);
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }
        let response = request.send().map_err(|e| Outcome::Retryable(e.to_string()))?;
        let status = response.status();
        if status.is_success() {
            let parsed: ChatResponse = response
                .json()
                .map_err(|e| Outcome::Fatal(LlmError::MalformedResponse {
                    detail: e.to_string(),
                }))?;
            parsed
                .choices
                .into_iter()
                .next()
                .map(|c| c.message.content)
                .ok_or_else(|| {
                    Outcome::Fatal(LlmError::MalformedResponse {
                        detail: "response carried no choices".to_string(),
                    })
                })
        } else if status.as_u16() == 429 || status.is_server_error() {
            Err(Outcome::Retryable(format!("status {status}")))
        } else {
            let detail = response
                .text()
                .unwrap_or_default()
                .chars()
                .take(400)
                .collect();
            Err(Outcome::Fatal(LlmError::Provider {
                status: status.as_u16(),
                detail,
            }))
        }
    }
}

enum Outcome {
    Retryable(String),
    Fatal(LlmError),
}

impl Provider for HttpProvider {
    fn id(&self) -> &str {
        &self.id
    }

    fn fetch(&self, prompt_text: &str, params: &CompletionParams) -> Result<String, LlmError> {
        let attempts = self.max_retries + 1;
        let mut last_detail = String::new();
        for attempt in 0..attempts {
            match self.send_once(prompt_text, params) {
                Ok(text) => return Ok(text),
                Err(Outcome::Fatal(error)) => return Err(error),
                Err(Outcome::Retryable(detail)) => {
                    last_detail = detail;
                    if attempt + 1 < attempts {
                        std::thread::sleep(self.base_backoff * 2u32.pow(attempt));
                    }
                }
            }
        }
        Err(LlmError::Transport {
            attempts,
            detail: last_detail,
        })
    }
}
