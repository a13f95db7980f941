//! Strategy prompt rendering.
//!
//! Eight strategies are supported: the annotated-question family (`dip`,
//! `dip-ep-no-ct`, `dip-no-ep-no-ct`, `non-insertion`) and the plain-question
//! baselines (`standard`, `english-pivot`, `english-pivot-thought`,
//! `cross-lingual-thought`). All are minimal edits of one canonical template
//! so that the dictionary, translation, and reasoning factors vary one at a
//! time. Templates live in `prompts/templates/` as plain text with
//! `{language}`, `{question}`, `{dictionary_block}`, and `{answer_format}`
//! placeholders.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::annotator::{annotate_interleaved, render_dictionary_block};
use crate::datasets::{AnswerType, BenchmarkItem};
use crate::languages::language_name;
use crate::lexicon::Lexicon;

const TPL_STANDARD: &str = include_str!("prompts/templates/standard.txt");
const TPL_NON_INSERTION: &str = include_str!("prompts/templates/non_insertion.txt");
const TPL_ENGLISH_PIVOT: &str = include_str!("prompts/templates/english_pivot.txt");
const TPL_ENGLISH_PIVOT_THOUGHT: &str =
    include_str!("prompts/templates/english_pivot_thought.txt");
const TPL_CROSS_LINGUAL_THOUGHT: &str =
    include_str!("prompts/templates/cross_lingual_thought.txt");
const TPL_DICTIONARY_CONSTRUCTION: &str =
    include_str!("prompts/templates/dictionary_construction.txt");

/// The eight prompting strategies, in result-table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PromptStrategy {
    Standard,
    NonInsertion,
    EnglishPivot,
    EnglishPivotThought,
    CrossLingualThought,
    DipNoEpNoCt,
    DipEpNoCt,
    DipFull,
}

impl PromptStrategy {
    pub const ALL: [PromptStrategy; 8] = [
        PromptStrategy::Standard,
        PromptStrategy::NonInsertion,
        PromptStrategy::EnglishPivot,
        PromptStrategy::EnglishPivotThought,
        PromptStrategy::CrossLingualThought,
        PromptStrategy::DipNoEpNoCt,
        PromptStrategy::DipEpNoCt,
        PromptStrategy::DipFull,
    ];

    /// Stable machine name used on the command line and in config files.
    pub fn name(self) -> &'static str {
        match self {
            PromptStrategy::Standard => "standard",
            PromptStrategy::NonInsertion => "non-insertion",
            PromptStrategy::EnglishPivot => "english-pivot",
            PromptStrategy::EnglishPivotThought => "english-pivot-thought",
            PromptStrategy::CrossLingualThought => "cross-lingual-thought",
            PromptStrategy::DipNoEpNoCt => "dip-no-ep-no-ct",
            PromptStrategy::DipEpNoCt => "dip-ep-no-ct",
            PromptStrategy::DipFull => "dip",
        }
    }

    /// Row label used in rendered result tables.
    pub fn display_name(self) -> &'static str {
        match self {
            PromptStrategy::Standard => "Standard Prompting",
            PromptStrategy::NonInsertion => "Non-insertion Prompting",
            PromptStrategy::EnglishPivot => "English Pivoting",
            PromptStrategy::EnglishPivotThought => "English Pivot Thought",
            PromptStrategy::CrossLingualThought => "Cross-lingual Thought",
            PromptStrategy::DipNoEpNoCt => "DIP w/o EP w/o CT",
            PromptStrategy::DipEpNoCt => "DIP w/ EP w/o CT",
            PromptStrategy::DipFull => "DIP",
        }
    }

    /// Strategies that consult the bilingual dictionary.
    pub fn uses_lexicon(self) -> bool {
        matches!(
            self,
            PromptStrategy::NonInsertion
                | PromptStrategy::DipNoEpNoCt
                | PromptStrategy::DipEpNoCt
                | PromptStrategy::DipFull
        )
    }

    /// Strategies whose output format requests an English translation.
    pub fn requests_translation(self) -> bool {
        matches!(
            self,
            PromptStrategy::EnglishPivot
                | PromptStrategy::EnglishPivotThought
                | PromptStrategy::DipEpNoCt
                | PromptStrategy::DipFull
        )
    }

    /// Strategies whose output format requests intermediate reasoning.
    pub fn requests_reasoning(self) -> bool {
        matches!(
            self,
            PromptStrategy::EnglishPivotThought
                | PromptStrategy::CrossLingualThought
                | PromptStrategy::DipFull
        )
    }

    fn template(self) -> &'static str {
        match self {
            PromptStrategy::Standard | PromptStrategy::DipNoEpNoCt => TPL_STANDARD,
            PromptStrategy::NonInsertion => TPL_NON_INSERTION,
            PromptStrategy::EnglishPivot | PromptStrategy::DipEpNoCt => TPL_ENGLISH_PIVOT,
            PromptStrategy::EnglishPivotThought | PromptStrategy::DipFull => {
                TPL_ENGLISH_PIVOT_THOUGHT
            }
            PromptStrategy::CrossLingualThought => TPL_CROSS_LINGUAL_THOUGHT,
        }
    }

    /// Whether the question text is annotated with interleaved glosses.
    fn annotates_question(self) -> bool {
        matches!(
            self,
            PromptStrategy::DipNoEpNoCt | PromptStrategy::DipEpNoCt | PromptStrategy::DipFull
        )
    }
}

impl fmt::Display for PromptStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PromptStrategy {
    type Err = PromptError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PromptStrategy::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| PromptError::UnknownStrategy {
                name: s.to_string(),
            })
    }
}

impl Serialize for PromptStrategy {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for PromptStrategy {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A fully rendered prompt.
#[derive(Debug, Clone, PartialEq)]
pub struct Prompt {
    pub text: String,
    /// `None` for the dictionary-construction prompt.
    pub strategy: Option<PromptStrategy>,
    pub language_name: String,
    pub question_text: String,
}

fn answer_format(answer_type: AnswerType) -> &'static str {
    match answer_type {
        AnswerType::Numeric => "numerical answer",
        AnswerType::Choice | AnswerType::Boolean => "answer (one of the given options)",
    }
}

fn strip_trailing_newline(template: &str) -> &str {
    template.strip_suffix('\n').unwrap_or(template)
}

/// Render the prompt for one strategy and one benchmark item.
///
/// A lexicon must be supplied exactly for the dictionary strategies
/// (`non-insertion` and the `dip` variants).
pub fn build_prompt(
    strategy: PromptStrategy,
    item: &BenchmarkItem,
    lexicon: Option<&Lexicon>,
) -> Result<Prompt, PromptError> {
    match (strategy.uses_lexicon(), lexicon) {
        (true, None) => return Err(PromptError::MissingLexicon { strategy }),
        (false, Some(_)) => return Err(PromptError::UnexpectedLexicon { strategy }),
        _ => {}
    }
    let language = language_name(&item.language).ok_or_else(|| PromptError::UnknownLanguage {
        code: item.language.clone(),
    })?;

    let question_text = if strategy.annotates_question() {
        annotate_interleaved(&item.question, lexicon.expect("checked above")).text
    } else {
        item.question.clone()
    };

    let mut text = strip_trailing_newline(strategy.template())
        .replace("{language}", language)
        .replace("{answer_format}", answer_format(item.answer_type));
    if strategy == PromptStrategy::NonInsertion {
        let block = render_dictionary_block(&item.question, lexicon.expect("checked above"));
        text = if block.is_empty() {
            text.replace("{dictionary_block}\n", "")
        } else {
            text.replace("{dictionary_block}", &block)
        };
    }
    // user-supplied text goes in last so placeholder markers inside it
    // are never rewritten
    let text = text.replace("{question}", &question_text);

    Ok(Prompt {
        text,
        strategy: Some(strategy),
        language_name: language.to_string(),
        question_text,
    })
}

/// Render the dictionary-construction prompt for one bitext pair. The
/// rendered text ends with the trailing `dictionary:` cue line.
pub fn dictionary_construction_prompt(
    english: &str,
    source: &str,
    language_name: &str,
    language_code: &str,
) -> Result<Prompt, PromptError> {
    if english.trim().is_empty() {
        return Err(PromptError::EmptyInput { field: "english" });
    }
    if source.trim().is_empty() {
        return Err(PromptError::EmptyInput { field: "source" });
    }
    let text = strip_trailing_newline(TPL_DICTIONARY_CONSTRUCTION)
        .replace("{language}", language_name)
        .replace("{lang}", language_code)
        .replace("{target}", english)
        .replace("{source}", source);
    Ok(Prompt {
        text,
        strategy: None,
        language_name: language_name.to_string(),
        question_text: source.to_string(),
    })
}

pub const PLACEHOLDER_MARKERS: [&str; 12] = [
    "{language}",
    "{question}",
    "{dictionary_block}",
    "{answer_format}",
    "{lang}",
    "{target}",
    "{source}",
    "<language>",
    "<question>",
    "<target>",
    "<source>",
    "<lang>",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PromptError {
    #[error("strategy {strategy} requires a lexicon")]
    MissingLexicon { strategy: PromptStrategy },
    #[error("strategy {strategy} does not take a lexicon")]
    UnexpectedLexicon { strategy: PromptStrategy },
    #[error("no display name for language code {code:?}")]
    UnknownLanguage { code: String },
    #[error("unknown strategy {name:?}")]
    UnknownStrategy { name: String },
    #[error("{field} must be non-empty")]
    EmptyInput { field: &'static str },
}
