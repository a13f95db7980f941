//! Dictionary-insertion prompting toolkit.
//!
//! Annotates low-resource-language questions with interleaved English
//! glosses from a bilingual lexicon, renders the full family of prompting
//! strategies around them, runs the strategy × language × dataset matrix
//! against a chat-completions endpoint or an offline replay store, parses
//! the responses into typed answers, and scores accuracy, translation
//! quality, and reasoning quality.

pub mod annotator;
pub mod answer;
pub mod datasets;
pub mod extraction;
pub mod harness;
pub mod languages;
pub mod lexicon;
pub mod llm;
pub mod metrics;
pub mod prompts;
pub mod segmenter;

pub use annotator::{annotate_interleaved, render_dictionary_block, strip_annotations, AnnotatedText};
pub use answer::{Answer, Plausibility, NUMERIC_TOLERANCE};
pub use datasets::{load_dataset, sample_subset, AnswerType, BenchmarkItem, DatasetKind};
pub use extraction::{
    parse_dictionary_response, parse_structured_response, ParsedResponse,
};
pub use harness::{
    aggregate_table, aggregate_tables, improvement_stats, run_matrix, score_thinking_quality,
    score_translation_quality, write_run_outputs, ImprovementStats, ResultTable, RunConfig,
    RunRecord,
};
pub use languages::language_name;
pub use lexicon::{load_lexicon, normalize_surface, Lexicon, LexiconEntry};
pub use llm::{cache_key, CompletionParams, LlmClient, ModelResponse, Provider};
pub use metrics::{accuracy, bleu, chrfpp, BleuScore, ChrfScore};
pub use prompts::{build_prompt, dictionary_construction_prompt, Prompt, PromptStrategy};
pub use segmenter::{segment, Token, TokenKind};
