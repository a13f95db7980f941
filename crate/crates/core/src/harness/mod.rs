//! Run execution and result aggregation: the strategy × language × dataset
//! matrix, per-table accuracy aggregation, and comparative statistics.

mod config;
mod report;

pub use config::{ProviderConfig, ProviderKind, RunConfig};
pub use report::{render_table_text, write_run_outputs, RunOutputs};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datasets::{BenchmarkItem, DatasetError, DatasetKind};
use crate::extraction::{parse_structured_response, ParsedResponse};
use crate::lexicon::{Lexicon, LexiconError};
use crate::llm::{cache_key, CompletionParams, LlmClient, LlmError};
use crate::metrics::{bleu, chrfpp, BleuScore, ChrfScore, MetricsError};
use crate::prompts::{build_prompt, PromptError, PromptStrategy};

/// One model interaction with parsed fields and its correctness verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub item_id: String,
    pub dataset: DatasetKind,
    pub language: String,
    pub strategy: PromptStrategy,
    pub prompt_digest: String,
    pub parsed: ParsedResponse,
    pub correct: bool,
    pub timing_ms: u64,
}

/// Execute every (item, strategy) pair. Output order is
/// (dataset, language, strategy, item_id) regardless of execution
/// interleaving; completions go through the client's cache.
pub fn run_matrix(
    items: &[BenchmarkItem],
    strategies: &[PromptStrategy],
    lexicons: &HashMap<String, Lexicon>,
    client: &LlmClient,
    params: &CompletionParams,
    max_concurrency: usize,
) -> Result<Vec<RunRecord>, HarnessError> {
    let needs_lexicon = strategies.iter().any(|s| s.uses_lexicon());
    if needs_lexicon {
        for item in items {
            if !lexicons.contains_key(&item.language) {
                return Err(HarnessError::MissingLexicon {
                    language: item.language.clone(),
                });
            }
        }
    }

    let jobs: Vec<(&BenchmarkItem, PromptStrategy)> = items
        .iter()
        .flat_map(|item| strategies.iter().map(move |&s| (item, s)))
        .collect();

    let run_one = |&(item, strategy): &(&BenchmarkItem, PromptStrategy)| -> Result<RunRecord, HarnessError> {
        let lexicon = strategy
            .uses_lexicon()
            .then(|| lexicons.get(&item.language).expect("checked above"));
        let prompt = build_prompt(strategy, item, lexicon).map_err(|source| {
            HarnessError::Prompt {
                item_id: item.id.clone(),
                strategy,
                source,
            }
        })?;
        let response = client.complete(&prompt, params).map_err(|source| {
            HarnessError::Completion {
                item_id: item.id.clone(),
                strategy,
                source,
            }
        })?;
        let parsed = parse_structured_response(&response.raw_text, strategy, &item.answer_spec());
        let correct = parsed.answer.matches(&item.gold);
        Ok(RunRecord {
            item_id: item.id.clone(),
            dataset: item.dataset,
            language: item.language.clone(),
            strategy,
            prompt_digest: cache_key(client.provider_id(), params, &prompt.text),
            parsed,
            correct,
            timing_ms: response.latency_ms,
        })
    };

    let workers = max_concurrency.max(1).min(jobs.len().max(1));
    let mut results: Vec<Option<Result<RunRecord, HarnessError>>> = Vec::new();
    if workers <= 1 {
        for job in &jobs {
            results.push(Some(run_one(job)));
        }
    } else {
        let slots: Mutex<Vec<Option<Result<RunRecord, HarnessError>>>> =
            Mutex::new((0..jobs.len()).map(|_| None).collect());
        let next = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= jobs.len() {
                        break;
                    }
                    let outcome = run_one(&jobs[i]);
                    slots.lock().expect("slot lock")[i] = Some(outcome);
                });
            }
        });
        results = slots.into_inner().expect("slot lock");
    }

    let mut records = Vec::with_capacity(jobs.len());
    for outcome in results {
        records.push(outcome.expect("every job ran")?);
    }
    records.sort_by(|a, b| {
        (a.dataset, &a.language, a.strategy, &a.item_id)
            .cmp(&(b.dataset, &b.language, b.strategy, &b.item_id))
    });
    Ok(records)
}

/// One row of a result table: per-language accuracy percentages and their
/// mean, both rounded half-away-from-zero to two decimals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub strategy: PromptStrategy,
    pub display: String,
    pub cells: BTreeMap<String, f64>,
    pub average: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub languages: Vec<String>,
    pub rows: Vec<ResultRow>,
}

fn round2(value: f64) -> f64 {
    (value * 100.0).round() / 100.0
}

/// Aggregate records into a strategy × language accuracy table. The records
/// must cover a full rectangular grid.
pub fn aggregate_table(records: &[RunRecord]) -> Result<ResultTable, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::NoRecords);
    }
    let languages: BTreeSet<&str> = records.iter().map(|r| r.language.as_str()).collect();
    let strategies: BTreeSet<PromptStrategy> = records.iter().map(|r| r.strategy).collect();

    let mut counts: HashMap<(PromptStrategy, &str), (usize, usize)> = HashMap::new();
    for record in records {
        let slot = counts
            .entry((record.strategy, record.language.as_str()))
            .or_insert((0, 0));
        slot.0 += record.correct as usize;
        slot.1 += 1;
    }

    let mut rows = Vec::new();
    for &strategy in &strategies {
        let mut cells = BTreeMap::new();
        for &language in &languages {
            let (correct, total) =
                counts
                    .get(&(strategy, language))
                    .ok_or_else(|| HarnessError::RaggedGrid {
                        strategy,
                        language: language.to_string(),
                    })?;
            cells.insert(
                language.to_string(),
                round2(100.0 * *correct as f64 / *total as f64),
            );
        }
        let average = round2(cells.values().sum::<f64>() / cells.len() as f64);
        rows.push(ResultRow {
            strategy,
            display: strategy.display_name().to_string(),
            cells,
            average,
        });
    }
    Ok(ResultTable {
        languages: languages.into_iter().map(str::to_string).collect(),
        rows,
    })
}

/// Tables grouped per dataset, in dataset order.
pub fn aggregate_tables(
    records: &[RunRecord],
) -> Result<BTreeMap<DatasetKind, ResultTable>, HarnessError> {
    let mut grouped: BTreeMap<DatasetKind, Vec<RunRecord>> = BTreeMap::new();
    for record in records {
        grouped.entry(record.dataset).or_default().push(record.clone());
    }
    grouped
        .into_iter()
        .map(|(dataset, records)| Ok((dataset, aggregate_table(&records)?)))
        .collect()
}

/// Counts of per-language deltas exceeding each threshold (strict).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ThresholdCounts {
    pub gt5: usize,
    pub gt10: usize,
    pub gt20: usize,
}

/// The same deltas as disjoint bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BandCounts {
    pub le5: usize,
    pub gt5_le10: usize,
    pub gt10_le20: usize,
    pub gt20: usize,
}

fn tally(deltas: &[f64]) -> (ThresholdCounts, BandCounts) {
    let mut nested = ThresholdCounts::default();
    let mut bands = BandCounts::default();
    for &d in deltas {
        let d = d.abs();
        if d > 5.0 {
            nested.gt5 += 1;
        }
        if d > 10.0 {
            nested.gt10 += 1;
        }
        if d > 20.0 {
            nested.gt20 += 1;
        }
        if d <= 5.0 {
            bands.le5 += 1;
        } else if d <= 10.0 {
            bands.gt5_le10 += 1;
        } else if d <= 20.0 {
            bands.gt10_le20 += 1;
        } else {
            bands.gt20 += 1;
        }
    }
    (nested, bands)
}

/// Per-language accuracy changes of a treatment over a baseline: improvement
/// and degradation counts with nested and banded threshold buckets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImprovementStats {
    pub languages: usize,
    pub improved_count: usize,
    pub degraded_count: usize,
    pub tie_count: usize,
    pub improved_gt: ThresholdCounts,
    pub improved_band: BandCounts,
    pub degraded_gt: ThresholdCounts,
    pub degraded_band: BandCounts,
    pub min_improved_delta: Option<f64>,
    pub max_improved_delta: Option<f64>,
}

pub fn improvement_stats(
    baseline: &BTreeMap<String, f64>,
    treatment: &BTreeMap<String, f64>,
) -> Result<ImprovementStats, HarnessError> {
    if baseline.keys().ne(treatment.keys()) {
        return Err(HarnessError::KeyMismatch {
            detail: format!(
                "baseline languages {:?} vs treatment languages {:?}",
                baseline.keys().collect::<Vec<_>>(),
                treatment.keys().collect::<Vec<_>>()
            ),
        });
    }
    let mut improved = Vec::new();
    let mut degraded = Vec::new();
    let mut ties = 0usize;
    for (language, base) in baseline {
        let delta = treatment[language] - base;
        if delta > 0.0 {
            improved.push(delta);
        } else if delta < 0.0 {
            degraded.push(delta);
        } else {
            ties += 1;
        }
    }
    let (improved_gt, improved_band) = tally(&improved);
    let (degraded_gt, degraded_band) = tally(&degraded);
    Ok(ImprovementStats {
        languages: baseline.len(),
        improved_count: improved.len(),
        degraded_count: degraded.len(),
        tie_count: ties,
        improved_gt,
        improved_band,
        degraded_gt,
        degraded_band,
        min_improved_delta: improved.iter().copied().reduce(f64::min),
        max_improved_delta: improved.iter().copied().reduce(f64::max),
    })
}

fn quality_scores<F>(
    records: &[RunRecord],
    items: &[BenchmarkItem],
    mut select: F,
) -> Result<BTreeMap<String, (BleuScore, ChrfScore)>, HarnessError>
where
    F: FnMut(&RunRecord, &BenchmarkItem) -> Result<(String, String), HarnessError>,
{
    let by_id: HashMap<&str, &BenchmarkItem> =
        items.iter().map(|i| (i.id.as_str(), i)).collect();
    let mut grouped: BTreeMap<String, (Vec<String>, Vec<String>)> = BTreeMap::new();
    for record in records {
        let item = by_id
            .get(record.item_id.as_str())
            .ok_or_else(|| HarnessError::UnknownItem {
                item_id: record.item_id.clone(),
            })?;
        let (hypothesis, reference) = select(record, item)?;
        let slot = grouped.entry(record.language.clone()).or_default();
        slot.0.push(hypothesis);
        slot.1.push(reference);
    }
    grouped
        .into_iter()
        .map(|(language, (hyps, refs))| {
            Ok((language, (bleu(&hyps, &refs)?, chrfpp(&hyps, &refs)?)))
        })
        .collect()
}

/// Per-language BLEU/chrF++ of parsed translations against the English
/// reference questions. Absent translations score as empty strings.
pub fn score_translation_quality(
    records: &[RunRecord],
    items: &[BenchmarkItem],
) -> Result<BTreeMap<String, (BleuScore, ChrfScore)>, HarnessError> {
    quality_scores(records, items, |record, item| {
        let reference =
            item.english_question
                .clone()
                .ok_or_else(|| HarnessError::MissingReference {
                    item_id: item.id.clone(),
                })?;
        Ok((
            record.parsed.translation.clone().unwrap_or_default(),
            reference,
        ))
    })
}

/// Per-language BLEU/chrF++ of parsed reasoning against the gold rationale.
/// Absent reasoning scores as empty strings.
pub fn score_thinking_quality(
    records: &[RunRecord],
    items: &[BenchmarkItem],
) -> Result<BTreeMap<String, (BleuScore, ChrfScore)>, HarnessError> {
    quality_scores(records, items, |record, item| {
        let reference =
            item.gold_rationale
                .clone()
                .ok_or_else(|| HarnessError::MissingRationale {
                    item_id: item.id.clone(),
                })?;
        Ok((
            record.parsed.reasoning.clone().unwrap_or_default(),
            reference,
        ))
    })
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {detail}")]
    Config { detail: String },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Llm(#[from] LlmError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("no lexicon for language {language}")]
    MissingLexicon { language: String },
    #[error("item {item_id}, strategy {strategy}: {source}")]
    Prompt {
        item_id: String,
        strategy: PromptStrategy,
        #[source]
        source: PromptError,
    },
    #[error("item {item_id}, strategy {strategy}: {source}")]
    Completion {
        item_id: String,
        strategy: PromptStrategy,
        #[source]
        source: LlmError,
    },
    #[error("missing cell for strategy {strategy}, language {language}")]
    RaggedGrid {
        strategy: PromptStrategy,
        language: String,
    },
    #[error("cannot aggregate zero records")]
    NoRecords,
    #[error("language keys differ: {detail}")]
    KeyMismatch { detail: String },
    #[error("record references unknown item {item_id}")]
    UnknownItem { item_id: String },
    #[error("item {item_id} has no english_question reference")]
    MissingReference { item_id: String },
    #[error("item {item_id} has no gold_rationale")]
    MissingRationale { item_id: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}
