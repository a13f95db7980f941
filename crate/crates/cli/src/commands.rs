//! Subcommand implementations.

use std::collections::HashMap;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use dip_core::annotator::{annotate_interleaved, render_dictionary_block};
use dip_core::answer::{Answer, Plausibility};
use dip_core::datasets::{load_dataset, sample_subset, AnswerType, BenchmarkItem, DatasetKind};
use dip_core::extraction::parse_dictionary_transcript;
use dip_core::harness::{run_matrix, write_run_outputs, HarnessError, RunConfig, RunRecord};
use dip_core::languages::language_name;
use dip_core::lexicon::{
    lexicon_to_jsonl, load_lexicon_with_policy, DuplicatePolicy, Lexicon, LexiconEntry,
};
use dip_core::llm::{LlmClient, ResponseCache};
use dip_core::metrics::{
    accuracy, bleu, bleu_signature, chrfpp, chrfpp_signature,
};
use dip_core::prompts::{build_prompt, dictionary_construction_prompt, PromptStrategy};

use crate::{CliError, Command};

impl From<HarnessError> for CliError {
    fn from(error: HarnessError) -> Self {
        match &error {
            HarnessError::Completion { .. } | HarnessError::Llm(_) => {
                CliError::Provider(error.to_string())
            }
            _ => CliError::Data(error.to_string()),
        }
    }
}

fn data_err(error: impl std::fmt::Display) -> CliError {
    CliError::Data(error.to_string())
}

pub(crate) fn parse_strategy(name: &str) -> Result<PromptStrategy, String> {
    name.parse().map_err(|_| {
        format!(
            "unknown strategy {name:?}; expected one of: {}",
            PromptStrategy::ALL
                .iter()
                .map(|s| s.name())
                .collect::<Vec<_>>()
                .join(", ")
        )
    })
}

pub(crate) fn parse_answer_type(name: &str) -> Result<AnswerType, String> {
    match name {
        "numeric" => Ok(AnswerType::Numeric),
        "choice" => Ok(AnswerType::Choice),
        "boolean" => Ok(AnswerType::Boolean),
        other => Err(format!(
            "unknown answer type {other:?}; expected numeric, choice, or boolean"
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Metric {
    Bleu,
    Chrfpp,
    Accuracy,
}

pub(crate) fn parse_metric(name: &str) -> Result<Metric, String> {
    match name {
        "bleu" => Ok(Metric::Bleu),
        "chrfpp" => Ok(Metric::Chrfpp),
        "accuracy" => Ok(Metric::Accuracy),
        other => Err(format!(
            "unknown metric {other:?}; expected bleu, chrfpp, or accuracy"
        )),
    }
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| data_err(format!("{}: {e}", path.display()))),
        None => {
            let mut buffer = String::new();
            std::io::stdin()
                .read_to_string(&mut buffer)
                .map_err(|e| data_err(format!("stdin: {e}")))?;
            Ok(buffer)
        }
    }
}

fn jsonl_records<T: for<'de> Deserialize<'de>>(
    content: &str,
    what: &str,
) -> Result<Vec<T>, CliError> {
    content
        .lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line)
                .map_err(|e| data_err(format!("{what} line {}: {e}", i + 1)))
        })
        .collect()
}

pub(crate) fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Annotate {
            lexicon,
            block,
            strict_duplicates,
        } => cmd_annotate(&lexicon, block, strict_duplicates),
        Command::Prompt {
            strategy,
            language,
            answer_type,
            lexicon,
        } => cmd_prompt(strategy, &language, answer_type, lexicon.as_deref()),
        Command::Dictgen { language, input } => cmd_dictgen(&language, input.as_deref()),
        Command::Dictparse {
            language,
            input,
            strict_duplicates,
        } => cmd_dictparse(&language, input.as_deref(), strict_duplicates),
        Command::Run { config, out_dir } => cmd_run(&config, out_dir),
        Command::Score { metric, input } => cmd_score(metric, input.as_deref()),
        Command::Report { records, out_dir } => cmd_report(&records, &out_dir),
    }
}

fn duplicate_policy(strict: bool) -> DuplicatePolicy {
    if strict {
        DuplicatePolicy::Reject
    } else {
        DuplicatePolicy::FirstWins
    }
}

fn cmd_annotate(lexicon_path: &Path, block: bool, strict: bool) -> Result<(), CliError> {
    let lexicon =
        load_lexicon_with_policy(lexicon_path, duplicate_policy(strict)).map_err(data_err)?;
    let text = read_input(None)?;
    if block {
        println!("{}", render_dictionary_block(&text, &lexicon));
    } else {
        print!("{}", annotate_interleaved(&text, &lexicon).text);
    }
    Ok(())
}

fn cmd_prompt(
    strategy: PromptStrategy,
    language: &str,
    answer_type: AnswerType,
    lexicon_path: Option<&Path>,
) -> Result<(), CliError> {
    let question = read_input(None)?;
    let question = question.trim_end_matches('\n').to_string();
    let lexicon = match lexicon_path {
        Some(path) => Some(
            load_lexicon_with_policy(path, DuplicatePolicy::FirstWins).map_err(data_err)?,
        ),
        None => None,
    };
    // a minimal stand-in item: only language, question, and answer type
    // influence the rendered text
    let (dataset, gold, choices) = match answer_type {
        AnswerType::Numeric => (DatasetKind::Gsm8k, Answer::numeric(0.0), None),
        AnswerType::Choice => (
            DatasetKind::Aqua,
            Answer::choice("A"),
            Some(
                ["A", "B", "C", "D"]
                    .iter()
                    .map(|l| dip_core::datasets::ChoiceOption {
                        label: l.to_string(),
                        text: String::new(),
                    })
                    .collect(),
            ),
        ),
        AnswerType::Boolean => (
            DatasetKind::Sports,
            Answer::boolean(Plausibility::Plausible),
            None,
        ),
    };
    let item = BenchmarkItem {
        id: "cli".to_string(),
        dataset,
        language: language.to_string(),
        question,
        answer_type,
        gold,
        choices,
        english_question: None,
        gold_rationale: None,
    };
    let prompt = build_prompt(strategy, &item, lexicon.as_ref()).map_err(data_err)?;
    println!("{}", prompt.text);
    Ok(())
}

#[derive(Deserialize)]
struct BitextLine {
    english: String,
    source: String,
}

fn cmd_dictgen(language: &str, input: Option<&Path>) -> Result<(), CliError> {
    let name = language_name(language)
        .ok_or_else(|| data_err(format!("no display name for language code {language:?}")))?;
    let content = read_input(input)?;
    let lines: Vec<BitextLine> = jsonl_records(&content, "bitext")?;
    for (i, line) in lines.iter().enumerate() {
        let prompt = dictionary_construction_prompt(&line.english, &line.source, name, language)
            .map_err(|e| data_err(format!("bitext line {}: {e}", i + 1)))?;
        let record = serde_json::json!({
            "index": i,
            "language": language,
            "prompt": prompt.text,
        });
        println!("{record}");
    }
    Ok(())
}

#[derive(Deserialize)]
struct TranscriptLine {
    raw: String,
    #[serde(default)]
    #[allow(dead_code)]
    language: Option<String>,
}

fn cmd_dictparse(language: &str, input: Option<&Path>, strict: bool) -> Result<(), CliError> {
    let content = read_input(input)?;
    let lines: Vec<TranscriptLine> = jsonl_records(&content, "transcript")?;
    let mut entries: Vec<LexiconEntry> = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let transcript = parse_dictionary_transcript(&line.raw, language)
            .map_err(|e| data_err(format!("transcript line {}: {e}", i + 1)))?;
        entries.extend(transcript.entries);
    }
    let lexicon = Lexicon::from_entries(language, entries, duplicate_policy(strict))
        .map_err(data_err)?;
    print!("{}", lexicon_to_jsonl(&lexicon));
    Ok(())
}

fn load_run_lexicons(
    config: &RunConfig,
) -> Result<HashMap<String, Lexicon>, CliError> {
    let mut lexicons = HashMap::new();
    if !config.strategies.iter().any(|s| s.uses_lexicon()) {
        return Ok(lexicons);
    }
    for language in &config.languages {
        let path = config.lexicon_dir.join(format!("{language}.jsonl"));
        let lexicon =
            load_lexicon_with_policy(&path, DuplicatePolicy::FirstWins).map_err(data_err)?;
        lexicons.insert(language.clone(), lexicon);
    }
    Ok(lexicons)
}

fn cmd_run(config_path: &Path, out_dir: Option<PathBuf>) -> Result<(), CliError> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(out_dir) = out_dir {
        config.out_dir = out_dir;
    }

    let mut items: Vec<BenchmarkItem> = Vec::new();
    for dataset_path in &config.datasets {
        let loaded = load_dataset(dataset_path).map_err(data_err)?;
        items.extend(
            loaded
                .into_iter()
                .filter(|item| config.languages.contains(&item.language)),
        );
    }
    if let Some(n) = config.sample_n {
        let seed = config.seed.unwrap_or(0);
        let mut groups: HashMap<(DatasetKind, String), Vec<BenchmarkItem>> = HashMap::new();
        for item in items {
            groups
                .entry((item.dataset, item.language.clone()))
                .or_default()
                .push(item);
        }
        let mut keys: Vec<_> = groups.keys().cloned().collect();
        keys.sort();
        let mut sampled = Vec::new();
        for key in keys {
            sampled.extend(sample_subset(&groups[&key], n, seed).map_err(data_err)?);
        }
        items = sampled;
    }
    if items.is_empty() {
        return Err(data_err("no benchmark items match the configured languages"));
    }

    let lexicons = load_run_lexicons(&config)?;
    let provider = config.build_provider()?;
    std::fs::create_dir_all(&config.out_dir)
        .map_err(|e| data_err(format!("{}: {e}", config.out_dir.display())))?;
    let cache = ResponseCache::open(&config.out_dir.join("cache.jsonl"))
        .map_err(|e| CliError::Data(e.to_string()))?;
    let client = LlmClient::new(provider, Some(cache));

    let records = run_matrix(
        &items,
        &config.strategies,
        &lexicons,
        &client,
        &config.completion_params(),
        config.max_concurrency,
    )?;
    let outputs = write_run_outputs(&config.out_dir, &records)?;
    eprintln!(
        "dip: {} records -> {}",
        records.len(),
        config.out_dir.display()
    );
    for path in [
        &outputs.records,
        &outputs.table_json,
        &outputs.table_txt,
        &outputs.stats_json,
    ] {
        eprintln!("dip:   {}", path.display());
    }
    Ok(())
}

#[derive(Deserialize)]
struct ScorePair {
    hypothesis: String,
    reference: String,
}

#[derive(Deserialize)]
struct AccuracyPair {
    prediction: serde_json::Value,
    gold: serde_json::Value,
}

fn typed_answer(value: &serde_json::Value, what: &str, line: usize) -> Result<Answer, CliError> {
    match value {
        serde_json::Value::Number(n) => Ok(Answer::numeric(n.as_f64().ok_or_else(|| {
            data_err(format!("{what} line {line}: number out of range"))
        })?)),
        serde_json::Value::String(s) => Ok(match s.as_str() {
            "plausible" => Answer::boolean(Plausibility::Plausible),
            "implausible" => Answer::boolean(Plausibility::Implausible),
            label => Answer::choice(label),
        }),
        serde_json::Value::Null => Ok(Answer::Unparseable),
        other => Err(data_err(format!(
            "{what} line {line}: expected number, string, or null, got {other}"
        ))),
    }
}

fn cmd_score(metric: Metric, input: Option<&Path>) -> Result<(), CliError> {
    let content = read_input(input)?;
    match metric {
        Metric::Bleu | Metric::Chrfpp => {
            let pairs: Vec<ScorePair> = jsonl_records(&content, "pairs")?;
            let hyps: Vec<&str> = pairs.iter().map(|p| p.hypothesis.as_str()).collect();
            let refs: Vec<&str> = pairs.iter().map(|p| p.reference.as_str()).collect();
            if metric == Metric::Bleu {
                let score = bleu(&hyps, &refs).map_err(data_err)?;
                println!("BLEU = {:.2}", score.score);
                println!(
                    "precisions = {:.1}/{:.1}/{:.1}/{:.1} brevity_penalty = {:.3} hyp_len = {} ref_len = {}",
                    score.precisions[0],
                    score.precisions[1],
                    score.precisions[2],
                    score.precisions[3],
                    score.brevity_penalty,
                    score.hyp_len,
                    score.ref_len
                );
                println!("signature: {}", bleu_signature());
            } else {
                let score = chrfpp(&hyps, &refs).map_err(data_err)?;
                println!("chrF++ = {:.2}", score.score);
                println!("signature: {}", chrfpp_signature());
            }
        }
        Metric::Accuracy => {
            let pairs: Vec<AccuracyPair> = jsonl_records(&content, "pairs")?;
            let mut predictions = Vec::with_capacity(pairs.len());
            let mut golds = Vec::with_capacity(pairs.len());
            for (i, pair) in pairs.iter().enumerate() {
                predictions.push(typed_answer(&pair.prediction, "prediction", i + 1)?);
                let gold = typed_answer(&pair.gold, "gold", i + 1)?;
                if gold == Answer::Unparseable {
                    return Err(data_err(format!("gold line {}: must be typed", i + 1)));
                }
                golds.push(gold);
            }
            let value = accuracy(&predictions, &golds).map_err(data_err)?;
            println!("accuracy = {value:.4}");
            println!("signature: exact-label|numeric-tolerance:1e-6");
        }
    }
    Ok(())
}

fn cmd_report(records_path: &Path, out_dir: &Path) -> Result<(), CliError> {
    let content = std::fs::read_to_string(records_path)
        .map_err(|e| data_err(format!("{}: {e}", records_path.display())))?;
    let records: Vec<RunRecord> = jsonl_records(&content, "records")?;
    write_run_outputs(out_dir, &records)?;
    eprintln!("dip: rendered {} records -> {}", records.len(), out_dir.display());
    Ok(())
}
