//! Append-only JSONL response cache: diffable, corruption-tolerant, last
//! record for a key wins.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::LlmError;

#[derive(Debug, Serialize, Deserialize)]
struct CacheRecord {
    key: String,
    raw_text: String,
    provider_id: String,
    model: String,
    timestamp: u64,
}

struct CacheState {
    map: HashMap<String, String>,
    file: File,
}

/// Thread-safe write-through cache backed by one JSONL file.
pub struct ResponseCache {
    path: PathBuf,
    state: Mutex<CacheState>,
}

impl ResponseCache {
    /// Open (or create) the cache file and index its records. Lines that do
    /// not parse are skipped with a warning.
    pub fn open(path: &Path) -> Result<Self, LlmError> {
        let mut map = HashMap::new();
        if path.exists() {
            let content = std::fs::read_to_string(path).map_err(|source| LlmError::Io {
                path: path.display().to_string(),
                source,
            })?;
            for (i, line) in content.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheRecord>(line) {
                    Ok(record) => {
                        map.insert(record.key, record.raw_text);
                    }
                    Err(e) => log::warn!(
                        "skipping corrupt cache line {} in {}: {e}",
                        i + 1,
                        path.display()
                    ),
                }
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|source| LlmError::Io {
                path: path.display().to_string(),
                source,
            })?;
        Ok(ResponseCache {
            path: path.to_path_buf(),
            state: Mutex::new(CacheState { map, file }),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.state.lock().expect("cache lock").map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &str) -> Option<String> {
        self.state.lock().expect("cache lock").map.get(key).cloned()
    }

    pub fn put(
        &self,
        key: &str,
        raw_text: &str,
        provider_id: &str,
        model: &str,
    ) -> Result<(), LlmError> {
        let record = CacheRecord {
            key: key.to_string(),
            raw_text: raw_text.to_string(),
            provider_id: provider_id.to_string(),
            model: model.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let line = serde_json::to_string(&record).map_err(|e| LlmError::Cache {
            detail: e.to_string(),
        })?;
        let mut state = self.state.lock().expect("cache lock");
        state
            .file
            .write_all(format!("{line}\n").as_bytes())
            .and_then(|_| state.file.flush())
            .map_err(|e| LlmError::Cache {
                detail: format!("append to {}: {e}", self.path.display()),
            })?;
        state.map.insert(key.to_string(), raw_text.to_string());
        Ok(())
    }
}
