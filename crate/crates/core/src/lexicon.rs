//! Bilingual dictionaries: loading, normalization, and longest-match lookup.
//!
//! A lexicon maps source-language surface forms (one or more words) to
//! English glosses. Matching is case- and normalization-insensitive:
//! surfaces are compared after canonical composition (NFC), default case
//! folding, and whitespace collapsing.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// Canonical form used for dictionary keys: NFC, default case fold, inner
/// whitespace runs collapsed to single spaces, outer whitespace trimmed.
pub fn normalize_surface(text: &str) -> String {
    let composed: String = text.nfc().collect();
    let folded = caseless::default_case_fold_str(&composed);
    folded.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Replace parentheses in a gloss so inserted annotations can be stripped
/// again without ambiguity.
pub fn escape_gloss(gloss: &str) -> String {
    gloss.replace('(', "[").replace(')', "]")
}

/// One source-surface → gloss pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub source_surface: String,
    pub gloss: String,
    pub normalized_key: String,
}

impl LexiconEntry {
    pub fn new(source_surface: &str, gloss: &str) -> Result<Self, LexiconError> {
        let surface = source_surface.trim();
        if surface.is_empty() {
            return Err(LexiconError::EmptyField { field: "source" });
        }
        if surface.contains('\n') || surface.contains('\r') {
            return Err(LexiconError::SurfaceContainsNewline {
                surface: source_surface.to_string(),
            });
        }
        let gloss = gloss.trim();
        if gloss.is_empty() {
            return Err(LexiconError::EmptyField { field: "gloss" });
        }
        Ok(Self {
            source_surface: surface.to_string(),
            gloss: gloss.to_string(),
            normalized_key: normalize_surface(surface),
        })
    }

    /// Number of whitespace-separated words in the surface form.
    pub fn word_count(&self) -> usize {
        self.normalized_key.split(' ').count()
    }
}

/// What to do when two entries normalize to the same key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    /// Keep the first entry, warn about later collisions.
    #[default]
    FirstWins,
    /// Fail the load.
    Reject,
}

/// An immutable, indexed bilingual dictionary for one language.
#[derive(Debug, Clone)]
pub struct Lexicon {
    language: String,
    entries: Vec<LexiconEntry>,
    index: HashMap<String, usize>,
    max_entry_words: usize,
}

impl Lexicon {
    /// Build a lexicon from entries, applying gloss escaping and the
    /// duplicate policy. Entry order is preserved.
    pub fn from_entries(
        language: &str,
        entries: impl IntoIterator<Item = LexiconEntry>,
        policy: DuplicatePolicy,
    ) -> Result<Self, LexiconError> {
        let mut lexicon = Lexicon {
            language: language.to_string(),
            entries: Vec::new(),
            index: HashMap::new(),
            max_entry_words: 0,
        };
        for entry in entries {
            lexicon.insert(entry, policy, None)?;
        }
        Ok(lexicon)
    }

    pub fn empty(language: &str) -> Self {
        Lexicon {
            language: language.to_string(),
            entries: Vec::new(),
            index: HashMap::new(),
            max_entry_words: 0,
        }
    }

    fn insert(
        &mut self,
        mut entry: LexiconEntry,
        policy: DuplicatePolicy,
        line: Option<usize>,
    ) -> Result<(), LexiconError> {
        entry.gloss = escape_gloss(&entry.gloss);
        if let Some(&existing) = self.index.get(&entry.normalized_key) {
            match policy {
                DuplicatePolicy::FirstWins => {
                    log::warn!(
                        "duplicate lexicon key {:?}: keeping {:?}, dropping {:?}",
                        entry.normalized_key,
                        self.entries[existing].gloss,
                        entry.gloss
                    );
                    return Ok(());
                }
                DuplicatePolicy::Reject => {
                    return Err(LexiconError::DuplicateKey {
                        key: entry.normalized_key,
                        line,
                    });
                }
            }
        }
        self.max_entry_words = self.max_entry_words.max(entry.word_count());
        self.index
            .insert(entry.normalized_key.clone(), self.entries.len());
        self.entries.push(entry);
        Ok(())
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest source_surface length, in words. Zero for an empty lexicon.
    pub fn max_entry_words(&self) -> usize {
        self.max_entry_words
    }

    pub fn get(&self, surface: &str) -> Option<&LexiconEntry> {
        self.index
            .get(&normalize_surface(surface))
            .map(|&i| &self.entries[i])
    }

    /// Find the longest entry matching `words[start..start+k]` for some
    /// `k >= 1`. Returns the match length in words together with the entry.
    pub fn lookup_longest<S: AsRef<str>>(
        &self,
        words: &[S],
        start: usize,
    ) -> Result<Option<(usize, &LexiconEntry)>, LexiconError> {
        if start >= words.len() {
            return Err(LexiconError::StartOutOfRange {
                start,
                len: words.len(),
            });
        }
        let upper = self.max_entry_words.min(words.len() - start);
        for k in (1..=upper).rev() {
            let candidate = words[start..start + k]
                .iter()
                .map(|w| w.as_ref())
                .collect::<Vec<_>>()
                .join(" ");
            if let Some(&i) = self.index.get(&normalize_surface(&candidate)) {
                return Ok(Some((k, &self.entries[i])));
            }
        }
        Ok(None)
    }
}

/// Lexicon file header: first JSONL line.
#[derive(Debug, Serialize, Deserialize)]
struct LexiconHeader {
    language: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct LexiconLine {
    source: String,
    gloss: String,
}

/// Load a lexicon from its JSONL representation: a `{"language": code}`
/// header line followed by one `{"source", "gloss"}` object per line.
pub fn load_lexicon(path: &Path) -> Result<Lexicon, LexiconError> {
    load_lexicon_with_policy(path, DuplicatePolicy::FirstWins)
}

pub fn load_lexicon_with_policy(
    path: &Path,
    policy: DuplicatePolicy,
) -> Result<Lexicon, LexiconError> {
    let content = fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_lexicon_jsonl(&content, policy)
}

pub(crate) fn parse_lexicon_jsonl(
    content: &str,
    policy: DuplicatePolicy,
) -> Result<Lexicon, LexiconError> {
    let mut lines = content.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((number, line)) => {
                if line.trim().is_empty() {
                    continue;
                }
                break serde_json::from_str::<LexiconHeader>(line).map_err(|e| {
                    LexiconError::MalformedLine {
                        line: number + 1,
                        detail: format!("expected {{\"language\": code}} header: {e}"),
                    }
                })?;
            }
            None => {
                return Err(LexiconError::MalformedLine {
                    line: 1,
                    detail: "missing {\"language\": code} header line".to_string(),
                })
            }
        }
    };

    let mut lexicon = Lexicon::empty(&header.language);
    for (number, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: LexiconLine =
            serde_json::from_str(line).map_err(|e| LexiconError::MalformedLine {
                line: number + 1,
                detail: e.to_string(),
            })?;
        let entry = LexiconEntry::new(&parsed.source, &parsed.gloss).map_err(|e| {
            LexiconError::MalformedLine {
                line: number + 1,
                detail: e.to_string(),
            }
        })?;
        lexicon.insert(entry, policy, Some(number + 1))?;
    }
    Ok(lexicon)
}

/// Serialize a lexicon back to its JSONL file format.
pub fn lexicon_to_jsonl(lexicon: &Lexicon) -> String {
    let mut out = String::new();
    out.push_str(
        &serde_json::to_string(&LexiconHeader {
            language: lexicon.language().to_string(),
        })
        .expect("header serializes"),
    );
    out.push('\n');
    for entry in lexicon.entries() {
        out.push_str(
            &serde_json::to_string(&LexiconLine {
                source: entry.source_surface.clone(),
                gloss: entry.gloss.clone(),
            })
            .expect("entry serializes"),
        );
        out.push('\n');
    }
    out
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {detail}")]
    MalformedLine { line: usize, detail: String },
    #[error("duplicate normalized key {key:?}{}", fmt_line(.line))]
    DuplicateKey { key: String, line: Option<usize> },
    #[error("{field} must be non-empty")]
    EmptyField { field: &'static str },
    #[error("source surface contains a newline: {surface:?}")]
    SurfaceContainsNewline { surface: String },
    #[error("lookup start {start} out of range for {len} words")]
    StartOutOfRange { start: usize, len: usize },
}

fn fmt_line(line: &Option<usize>) -> String {
    match line {
        Some(n) => format!(" (line {n})"),
        None => String::new(),
    }
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({} entries)", self.language, self.entries.len())
    }
}
