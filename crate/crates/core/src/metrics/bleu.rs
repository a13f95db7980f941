//! Corpus BLEU with the default signature: 13a tokenization, case-sensitive,
//! n-gram order 4, exponential smoothing of zero counts, standard brevity
//! penalty, one reference per hypothesis. Scores are on the 0-100 scale.

use std::collections::HashMap;

use super::tokenizer::tokenize_13a;
use super::MetricsError;

pub const BLEU_ORDER: usize = 4;

/// Floor used for the log of a zero precision; drives the score to 0.
const LOG_FLOOR: f64 = -9_999_999_999.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BleuScore {
    pub score: f64,
    pub precisions: [f64; BLEU_ORDER],
    pub brevity_penalty: f64,
    pub hyp_len: usize,
    pub ref_len: usize,
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<String, u64> {
    let mut counts = HashMap::new();
    if tokens.len() < n {
        return counts;
    }
    for window in tokens.windows(n) {
        *counts.entry(window.join(" ")).or_insert(0) += 1;
    }
    counts
}

pub fn bleu<H: AsRef<str>, R: AsRef<str>>(
    hypotheses: &[H],
    references: &[R],
) -> Result<BleuScore, MetricsError> {
    if hypotheses.len() != references.len() {
        return Err(MetricsError::LengthMismatch {
            hypotheses: hypotheses.len(),
            references: references.len(),
        });
    }
    if hypotheses.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }

    let mut correct = [0u64; BLEU_ORDER];
    let mut total = [0u64; BLEU_ORDER];
    let mut hyp_len = 0usize;
    let mut ref_len = 0usize;

    for (hyp, reference) in hypotheses.iter().zip(references) {
        let hyp_tokens = tokenize_13a(hyp.as_ref());
        let ref_tokens = tokenize_13a(reference.as_ref());
        hyp_len += hyp_tokens.len();
        ref_len += ref_tokens.len();
        for n in 1..=BLEU_ORDER {
            let hyp_ngrams = ngram_counts(&hyp_tokens, n);
            if hyp_ngrams.is_empty() {
                continue;
            }
            let ref_ngrams = ngram_counts(&ref_tokens, n);
            for (ngram, count) in &hyp_ngrams {
                total[n - 1] += count;
                if let Some(ref_count) = ref_ngrams.get(ngram) {
                    correct[n - 1] += count.min(ref_count);
                }
            }
        }
    }

    let brevity_penalty = if hyp_len < ref_len {
        if hyp_len > 0 {
            (1.0 - ref_len as f64 / hyp_len as f64).exp()
        } else {
            0.0
        }
    } else {
        1.0
    };

    let mut precisions = [0.0f64; BLEU_ORDER];
    let mut smooth = 1.0f64;
    for n in 0..BLEU_ORDER {
        if total[n] == 0 {
            break;
        }
        if correct[n] == 0 {
            smooth *= 2.0;
            precisions[n] = 100.0 / (smooth * total[n] as f64);
        } else {
            precisions[n] = 100.0 * correct[n] as f64 / total[n] as f64;
        }
    }

    // geometric mean of the four precisions; the equal-precision case is
    // computed directly so identical corpora score 100.0 exactly
    let mean = if precisions.iter().all(|&p| p == precisions[0]) {
        precisions[0]
    } else {
        let log_sum: f64 = precisions
            .iter()
            .map(|&p| if p > 0.0 { p.ln() } else { LOG_FLOOR })
            .sum();
        (log_sum / BLEU_ORDER as f64).exp()
    };

    Ok(BleuScore {
        score: brevity_penalty * mean,
        precisions,
        brevity_penalty,
        hyp_len,
        ref_len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_corpora_score_exactly_100() {
        let texts = ["The dog bit the man.", "Оқушылар мектепке барды."];
        let got = bleu(&texts, &texts).unwrap();
        assert_eq!(got.score, 100.0);
        assert_eq!(got.brevity_penalty, 1.0);
        assert_eq!(got.precisions, [100.0; 4]);
    }

    #[test]
    fn zero_overlap_short_hypothesis_scores_zero() {
        let got = bleu(&["a b c"], &["x y z w v"]).unwrap();
        assert!(got.score.abs() < 1e-9, "score {}", got.score);
        assert!(got.brevity_penalty < 1.0);
    }

    #[test]
    fn brevity_penalty_is_one_when_hypothesis_is_longer() {
        let got = bleu(&["a b c d e f"], &["a b c"]).unwrap();
        assert_eq!(got.brevity_penalty, 1.0);
        assert!(got.hyp_len >= got.ref_len);
    }

    #[test]
    fn smoothing_halves_zero_count_precisions() {
        // 5-token hypothesis, unigram overlap only: higher orders smoothed
        let got = bleu(&["a b c d e"], &["a x y z w"]).unwrap();
        assert!((got.precisions[0] - 20.0).abs() < 1e-12);
        assert!((got.precisions[1] - 100.0 / (2.0 * 4.0)).abs() < 1e-12);
        assert!((got.precisions[2] - 100.0 / (4.0 * 3.0)).abs() < 1e-12);
        assert!((got.precisions[3] - 100.0 / (8.0 * 2.0)).abs() < 1e-12);
    }

    #[test]
    fn mismatched_lengths_and_empty_corpus_error() {
        assert!(matches!(
            bleu(&["a"], &["a", "b"]).unwrap_err(),
            MetricsError::LengthMismatch { .. }
        ));
        let none: [&str; 0] = [];
        assert!(matches!(
            bleu(&none, &none).unwrap_err(),
            MetricsError::EmptyCorpus
        ));
    }

    #[test]
    fn corpus_score_is_permutation_invariant() {
        let hyps = ["a b c d", "x y z", "p q r s t"];
        let refs = ["a b c e", "x w z", "p q r s u"];
        let forward = bleu(&hyps, &refs).unwrap();
        let hyps_rev: Vec<&str> = hyps.iter().rev().copied().collect();
        let refs_rev: Vec<&str> = refs.iter().rev().copied().collect();
        let backward = bleu(&hyps_rev, &refs_rev).unwrap();
        assert_eq!(forward.score, backward.score);
    }

    #[test]
    fn score_is_bp_times_geometric_mean() {
        let got = bleu(&["the cat sat on the mat today"], &["the cat sat on a mat"]).unwrap();
        let gm = (got.precisions.iter().map(|p| p.ln()).sum::<f64>() / 4.0).exp();
        assert!((got.score - got.brevity_penalty * gm).abs() < 1e-9);
    }
}
