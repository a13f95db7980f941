//! Offline provider serving stored responses keyed by prompt digest.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{cache_key, CompletionParams, LlmError, Provider};

pub const REPLAY_PROVIDER_ID: &str = "replay";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplayRecord {
    pub key: String,
    pub raw_text: String,
}

/// Serves completions from a `{key, raw_text}` JSONL store. Keys are the
/// standard request digests computed with provider id `"replay"`.
pub struct ReplayProvider {
    store: HashMap<String, String>,
}

impl ReplayProvider {
    pub fn load(path: &Path) -> Result<Self, LlmError> {
        let content = std::fs::read_to_string(path).map_err(|source| LlmError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut store = HashMap::new();
        for (i, line) in content.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: ReplayRecord =
                serde_json::from_str(line).map_err(|e| LlmError::Cache {
                    detail: format!("replay store {} line {}: {e}", path.display(), i + 1),
                })?;
            store.insert(record.key, record.raw_text);
        }
        Ok(ReplayProvider { store })
    }

    pub fn from_records(records: impl IntoIterator<Item = ReplayRecord>) -> Self {
        ReplayProvider {
            store: records
                .into_iter()
                .map(|r| (r.key, r.raw_text))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }
}

impl Provider for ReplayProvider {
    fn id(&self) -> &str {
        REPLAY_PROVIDER_ID
    }

    fn fetch(&self, prompt_text: &str, params: &CompletionParams) -> Result<String, LlmError> {
        let key = cache_key(REPLAY_PROVIDER_ID, params, prompt_text);
        self.store
            .get(&key)
            .cloned()
            .ok_or(LlmError::ReplayMiss { key })
    }

    fn deterministic(&self) -> bool {
        true
    }
}

/// Serialize replay records in store order as JSONL.
pub fn replay_records_to_jsonl(records: &[ReplayRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}
