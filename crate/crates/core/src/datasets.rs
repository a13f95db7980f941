//! Benchmark item loading: one JSONL schema for all five tasks.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::answer::{Answer, Plausibility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Gsm8k,
    Svamp,
    Aqua,
    Date,
    Sports,
}

impl DatasetKind {
    pub fn name(self) -> &'static str {
        match self {
            DatasetKind::Gsm8k => "gsm8k",
            DatasetKind::Svamp => "svamp",
            DatasetKind::Aqua => "aqua",
            DatasetKind::Date => "date",
            DatasetKind::Sports => "sports",
        }
    }

    /// The answer type every item of this dataset must carry.
    pub fn expected_answer_type(self) -> AnswerType {
        match self {
            DatasetKind::Gsm8k | DatasetKind::Svamp => AnswerType::Numeric,
            DatasetKind::Aqua | DatasetKind::Date => AnswerType::Choice,
            DatasetKind::Sports => AnswerType::Boolean,
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DatasetKind {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gsm8k" => Ok(DatasetKind::Gsm8k),
            "svamp" => Ok(DatasetKind::Svamp),
            "aqua" => Ok(DatasetKind::Aqua),
            "date" => Ok(DatasetKind::Date),
            "sports" => Ok(DatasetKind::Sports),
            other => Err(DatasetError::UnknownDataset {
                name: other.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnswerType {
    Numeric,
    Choice,
    Boolean,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceOption {
    pub label: String,
    pub text: String,
}

/// One question instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkItem {
    pub id: String,
    pub dataset: DatasetKind,
    pub language: String,
    pub question: String,
    pub answer_type: AnswerType,
    pub gold: Answer,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choices: Option<Vec<ChoiceOption>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub english_question: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gold_rationale: Option<String>,
}

/// What the response parser should look for, derived from the item.
#[derive(Debug, Clone, PartialEq)]
pub enum AnswerSpec {
    Numeric,
    Choice { labels: Vec<String> },
    Boolean,
}

impl BenchmarkItem {
    pub fn answer_spec(&self) -> AnswerSpec {
        match self.answer_type {
            AnswerType::Numeric => AnswerSpec::Numeric,
            AnswerType::Choice => AnswerSpec::Choice {
                labels: self
                    .choices
                    .as_ref()
                    .map(|cs| cs.iter().map(|c| c.label.clone()).collect())
                    .unwrap_or_default(),
            },
            AnswerType::Boolean => AnswerSpec::Boolean,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawItem {
    id: String,
    dataset: DatasetKind,
    language: String,
    question: String,
    answer_type: AnswerType,
    gold: Value,
    #[serde(default)]
    choices: Option<Vec<ChoiceOption>>,
    #[serde(default)]
    english_question: Option<String>,
    #[serde(default)]
    gold_rationale: Option<String>,
}

fn violation(line: usize, field: &'static str, detail: impl Into<String>) -> DatasetError {
    DatasetError::SchemaViolation {
        line,
        field,
        detail: detail.into(),
    }
}

fn validate(raw: RawItem, line: usize) -> Result<BenchmarkItem, DatasetError> {
    if raw.id.trim().is_empty() {
        return Err(violation(line, "id", "must be non-empty"));
    }
    if raw.question.trim().is_empty() {
        return Err(violation(line, "question", "must be non-empty"));
    }
    let expected = raw.dataset.expected_answer_type();
    if raw.answer_type != expected {
        return Err(violation(
            line,
            "answer_type",
            format!(
                "dataset {} requires answer_type {:?}",
                raw.dataset.name(),
                expected
            ),
        ));
    }
    match (raw.answer_type, raw.choices.as_ref()) {
        (AnswerType::Choice, None) => {
            return Err(violation(line, "choices", "required for choice items"))
        }
        (AnswerType::Choice, Some(cs)) if cs.is_empty() => {
            return Err(violation(line, "choices", "must be non-empty"))
        }
        (AnswerType::Numeric | AnswerType::Boolean, Some(_)) => {
            return Err(violation(line, "choices", "only allowed on choice items"))
        }
        _ => {}
    }

    let gold = match raw.answer_type {
        AnswerType::Numeric => {
            let value = raw
                .gold
                .as_f64()
                .ok_or_else(|| violation(line, "gold", "must be a number"))?;
            Answer::numeric(value)
        }
        AnswerType::Choice => {
            let label = raw
                .gold
                .as_str()
                .ok_or_else(|| violation(line, "gold", "must be a choice label"))?;
            let labels: Vec<&str> = raw
                .choices
                .as_ref()
                .expect("validated above")
                .iter()
                .map(|c| c.label.as_str())
                .collect();
            if !labels.contains(&label) {
                return Err(violation(
                    line,
                    "gold",
                    format!("label {label:?} not among choices {labels:?}"),
                ));
            }
            Answer::choice(label)
        }
        AnswerType::Boolean => {
            let text = raw
                .gold
                .as_str()
                .ok_or_else(|| violation(line, "gold", "must be \"plausible\" or \"implausible\""))?;
            let value = match text {
                "plausible" => Plausibility::Plausible,
                "implausible" => Plausibility::Implausible,
                other => {
                    return Err(violation(
                        line,
                        "gold",
                        format!("expected \"plausible\" or \"implausible\", got {other:?}"),
                    ))
                }
            };
            Answer::boolean(value)
        }
    };

    Ok(BenchmarkItem {
        id: raw.id,
        dataset: raw.dataset,
        language: raw.language,
        question: raw.question,
        answer_type: raw.answer_type,
        gold,
        choices: raw.choices,
        english_question: raw.english_question,
        gold_rationale: raw.gold_rationale,
    })
}

/// Load and validate benchmark items from a JSONL file, preserving file order.
pub fn load_dataset(path: &Path) -> Result<Vec<BenchmarkItem>, DatasetError> {
    let content = fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset_jsonl(&content)
}

pub(crate) fn parse_dataset_jsonl(content: &str) -> Result<Vec<BenchmarkItem>, DatasetError> {
    let mut items = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawItem = serde_json::from_str(line).map_err(|e| DatasetError::SchemaViolation {
            line: i + 1,
            field: "(json)",
            detail: e.to_string(),
        })?;
        items.push(validate(raw, i + 1)?);
    }
    Ok(items)
}

/// Deterministic pseudo-random subset of size `n`, ordered by original index.
pub fn sample_subset(
    items: &[BenchmarkItem],
    n: usize,
    seed: u64,
) -> Result<Vec<BenchmarkItem>, DatasetError> {
    if n > items.len() {
        return Err(DatasetError::SampleTooLarge {
            n,
            available: items.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices = rand::seq::index::sample(&mut rng, items.len(), n).into_vec();
    indices.sort_unstable();
    Ok(indices.into_iter().map(|i| items[i].clone()).collect())
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}, field {field}: {detail}")]
    SchemaViolation {
        line: usize,
        field: &'static str,
        detail: String,
    },
    #[error("unknown dataset {name:?}")]
    UnknownDataset { name: String },
    #[error("sample size {n} exceeds {available} available items")]
    SampleTooLarge { n: usize, available: usize },
}
