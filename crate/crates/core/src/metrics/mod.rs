//! Self-contained corpus scorers: accuracy, BLEU, and chrF++.

mod bleu;
mod chrf;
mod tokenizer;

pub use bleu::{bleu, BleuScore, BLEU_ORDER};
pub use chrf::{chrfpp, ChrfScore, CHRF_BETA, CHRF_CHAR_ORDER, CHRF_WORD_ORDER};
pub use tokenizer::tokenize_13a;

use thiserror::Error;

use crate::answer::Answer;

/// Audit string describing the BLEU configuration.
pub fn bleu_signature() -> &'static str {
    "nrefs:1|case:mixed|eff:no|tok:13a|smooth:exp"
}

/// Audit string describing the chrF++ configuration.
pub fn chrfpp_signature() -> &'static str {
    "nrefs:1|case:mixed|eff:yes|nc:6|nw:2|space:no"
}

/// Fraction of items whose typed answers match, in `[0, 1]`.
pub fn accuracy(predictions: &[Answer], golds: &[Answer]) -> Result<f64, MetricsError> {
    if predictions.len() != golds.len() {
        return Err(MetricsError::LengthMismatch {
            hypotheses: predictions.len(),
            references: golds.len(),
        });
    }
    if predictions.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let hits = predictions
        .iter()
        .zip(golds)
        .filter(|(p, g)| p.matches(g))
        .count();
    Ok(hits as f64 / predictions.len() as f64)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("corpus length mismatch: {hypotheses} hypotheses vs {references} references")]
    LengthMismatch {
        hypotheses: usize,
        references: usize,
    },
    #[error("empty corpus")]
    EmptyCorpus,
}
