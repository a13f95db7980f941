//! Parsing model output: numbered sections, typed final answers, and
//! dictionary-construction transcripts.

use once_cell::sync::Lazy;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::answer::{Answer, Plausibility};
use crate::datasets::AnswerSpec;
use crate::lexicon::{LexiconEntry, LexiconError};
use crate::prompts::PromptStrategy;

/// A model response split into its requested parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsedResponse {
    pub translation: Option<String>,
    pub reasoning: Option<String>,
    pub final_answer_text: String,
    pub answer: Answer,
}

static SECTION_HEADER: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"^\s*([1-9])\s*[.:]\s*(.*)$").unwrap());

/// Split `raw` on numbered section headers (`1.`, `2 .`, `3:`, …) appearing
/// at line starts. Headers must appear in ascending order; anything else is
/// section content.
fn split_sections(raw: &str) -> [Option<String>; 3] {
    let mut sections: [Option<Vec<&str>>; 3] = [None, None, None];
    let mut current: Option<usize> = None;
    let mut max_seen = 0u32;
    for line in raw.lines() {
        if let Some(caps) = SECTION_HEADER.captures(line) {
            let number: u32 = caps[1].parse().expect("single digit");
            if number > max_seen && (1..=3).contains(&number) {
                max_seen = number;
                let idx = (number - 1) as usize;
                sections[idx] = Some(vec![caps.get(2).map_or("", |m| m.as_str())]);
                current = Some(idx);
                continue;
            }
        }
        if let Some(idx) = current {
            sections[idx].as_mut().expect("opened above").push(line);
        }
    }
    sections.map(|s| s.map(|lines| lines.join("\n").trim().to_string()))
}

fn extract_answer(text: &str, spec: &AnswerSpec) -> Answer {
    match spec {
        AnswerSpec::Numeric => extract_numeric_answer(text)
            .map(Answer::numeric)
            .unwrap_or(Answer::Unparseable),
        AnswerSpec::Choice { labels } => extract_choice(text, labels)
            .map(Answer::choice)
            .unwrap_or(Answer::Unparseable),
        AnswerSpec::Boolean => extract_boolean(text)
            .map(Answer::boolean)
            .unwrap_or(Answer::Unparseable),
    }
}

/// Parse a model response for one strategy. Total: arbitrary text degrades
/// to absent sections and an `Unparseable` answer, never an error.
pub fn parse_structured_response(
    raw: &str,
    strategy: PromptStrategy,
    spec: &AnswerSpec,
) -> ParsedResponse {
    let sections = split_sections(raw);

    let translation = if strategy.requests_translation() {
        sections[0].clone()
    } else {
        None
    };
    let reasoning = if strategy.requests_reasoning() {
        let idx = if strategy.requests_translation() { 1 } else { 0 };
        sections[idx].clone()
    } else {
        None
    };
    let final_answer_text = sections[2]
        .clone()
        .unwrap_or_else(|| raw.trim().to_string());
    let answer = extract_answer(&final_answer_text, spec);

    ParsedResponse {
        translation,
        reasoning,
        final_answer_text,
        answer,
    }
}

static NUMBER: Lazy<Regex> = Lazy::new(|| Regex::new(r"-?\d[\d,]*(?:\.\d+)?").unwrap());

/// Last number in the text, ignoring thousands separators, currency symbols,
/// and trailing periods. Accepts decimals and negatives.
pub fn extract_numeric_answer(text: &str) -> Option<f64> {
    let mut last = None;
    for m in NUMBER.find_iter(text) {
        let mut digits = m.as_str();
        if digits.starts_with('-') {
            // a dash right after a digit is a range or hyphen, not a sign
            let preceded_by_digit = text[..m.start()]
                .chars()
                .next_back()
                .is_some_and(|c| c.is_ascii_digit());
            if preceded_by_digit {
                digits = &digits[1..];
            }
        }
        if let Ok(value) = digits.replace(',', "").parse::<f64>() {
            last = Some(value);
        }
    }
    last
}

/// Last standalone occurrence of any label (word-boundary, case-insensitive),
/// canonicalized to the spelling in `labels`.
pub fn extract_choice<S: AsRef<str>>(text: &str, labels: &[S]) -> Option<String> {
    if labels.is_empty() {
        return None;
    }
    let alternation = labels
        .iter()
        .map(|l| regex::escape(l.as_ref()))
        .collect::<Vec<_>>()
        .join("|");
    let re = Regex::new(&format!(r"(?i)\b(?:{alternation})\b")).ok()?;
    let found = re.find_iter(text).last()?.as_str();
    Some(
        labels
            .iter()
            .map(|l| l.as_ref())
            .find(|l| l.eq_ignore_ascii_case(found))
            .unwrap_or(found)
            .to_string(),
    )
}

static NEGATIVE: Lazy<Regex> =
    Lazy::new(|| Regex::new(r"(?i)\b(?:implausible|not\s+plausible|no)\b").unwrap());
static POSITIVE: Lazy<Regex> = Lazy::new(|| Regex::new(r"(?i)\b(?:plausible|yes)\b").unwrap());

/// Plausibility verdict; negative wordings win when both polarities appear.
pub fn extract_boolean(text: &str) -> Option<Plausibility> {
    if NEGATIVE.is_match(text) {
        Some(Plausibility::Implausible)
    } else if POSITIVE.is_match(text) {
        Some(Plausibility::Plausible)
    } else {
        None
    }
}

/// A parsed dictionary-construction response.
#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryTranscript {
    pub english: Option<String>,
    pub source: Option<String>,
    pub entries: Vec<LexiconEntry>,
}

/// Parse a construction response: locate the `dictionary:` line and read the
/// `<surface words> (<gloss>)` groups after it. The `English:` and
/// `<code>:` lines are kept for provenance.
pub fn parse_dictionary_transcript(
    raw: &str,
    expected_code: &str,
) -> Result<DictionaryTranscript, ExtractionError> {
    let source_prefix = format!("{expected_code}:");
    let mut english = None;
    let mut source = None;
    let mut dict_start = None;

    let mut offset = 0;
    for line in raw.split_inclusive('\n') {
        let content = line.strip_suffix('\n').unwrap_or(line);
        let trimmed = content.trim_start();
        let lead = content.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("dictionary:") {
            let _ = rest;
            dict_start = Some(offset + lead + "dictionary:".len());
            break;
        } else if let Some(rest) = trimmed.strip_prefix("English:") {
            english.get_or_insert_with(|| rest.trim().to_string());
        } else if let Some(rest) = trimmed.strip_prefix(&source_prefix) {
            source.get_or_insert_with(|| rest.trim().to_string());
        }
        offset += line.len();
    }

    let start = dict_start.ok_or(ExtractionError::MissingDictionaryLine)?;
    let entries = parse_entry_groups(&raw[start..], start)?;
    Ok(DictionaryTranscript {
        english,
        source,
        entries,
    })
}

/// The entry sequence of a construction response (see
/// [`parse_dictionary_transcript`] for the provenance-carrying variant).
pub fn parse_dictionary_response(
    raw: &str,
    expected_code: &str,
) -> Result<Vec<LexiconEntry>, ExtractionError> {
    Ok(parse_dictionary_transcript(raw, expected_code)?.entries)
}

/// Render entries in the construction format: `s1 (g1) s2 (g2) …`.
pub fn render_dictionary_entries(entries: &[LexiconEntry]) -> String {
    entries
        .iter()
        .map(|e| format!("{} ({})", e.source_surface, e.gloss))
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_entry_groups(text: &str, base: usize) -> Result<Vec<LexiconEntry>, ExtractionError> {
    let mut entries = Vec::new();
    let mut surface = String::new();
    let mut gloss: Option<String> = None;
    for (i, c) in text.char_indices() {
        match (&mut gloss, c) {
            (None, '(') => gloss = Some(String::new()),
            (None, ')') => {
                return Err(ExtractionError::UnbalancedParenthesis { offset: base + i })
            }
            (None, _) => surface.push(c),
            (Some(_), '(') => {
                return Err(ExtractionError::UnbalancedParenthesis { offset: base + i })
            }
            (Some(pending), ')') => {
                let surface_words = surface.split_whitespace().collect::<Vec<_>>().join(" ");
                if surface_words.is_empty() {
                    return Err(ExtractionError::EmptyEntry { offset: base + i });
                }
                if pending.trim().is_empty() {
                    return Err(ExtractionError::EmptyEntry { offset: base + i });
                }
                entries.push(LexiconEntry::new(&surface_words, pending.trim())?);
                surface.clear();
                gloss = None;
            }
            (Some(pending), _) => pending.push(c),
        }
    }
    if gloss.is_some() {
        return Err(ExtractionError::UnbalancedParenthesis {
            offset: base + text.len(),
        });
    }
    // words after the last close parenthesis (trailing punctuation and the
    // like) are ignored
    Ok(entries)
}

#[derive(Debug, Error)]
pub enum ExtractionError {
    #[error("no line starting with \"dictionary:\" in response")]
    MissingDictionaryLine,
    #[error("unbalanced parenthesis at byte {offset}")]
    UnbalancedParenthesis { offset: usize },
    #[error("entry without surface words or gloss ending at byte {offset}")]
    EmptyEntry { offset: usize },
    #[error(transparent)]
    Entry(#[from] LexiconError),
}
