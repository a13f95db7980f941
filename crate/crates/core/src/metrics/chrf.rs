//! Corpus chrF++ with the default signature: character n-grams up to order 6
//! over whitespace-stripped text, word n-grams up to order 2, beta 2,
//! effective-order averaging of precision and recall. Scores are 0-100.

use std::collections::HashMap;

use super::MetricsError;

pub const CHRF_CHAR_ORDER: usize = 6;
pub const CHRF_WORD_ORDER: usize = 2;
pub const CHRF_BETA: f64 = 2.0;

const TOTAL_ORDERS: usize = CHRF_CHAR_ORDER + CHRF_WORD_ORDER;

#[derive(Debug, Clone, PartialEq)]
pub struct ChrfScore {
    pub score: f64,
    pub char_order: usize,
    pub word_order: usize,
    pub beta: f64,
}

fn is_ascii_punct(c: char) -> bool {
    c.is_ascii_punctuation()
}

/// Primitive word tokenization for the word-n-gram half of chrF++: peel one
/// punctuation character off a word edge (trailing first), nothing more.
fn chrf_words(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    for w in line.split_whitespace() {
        let mut chars = w.chars();
        let first = chars.next().expect("split_whitespace yields non-empty");
        if chars.next().is_none() {
            out.push(w.to_string());
            continue;
        }
        let last = w.chars().last().unwrap();
        if is_ascii_punct(last) {
            let cut = w.len() - last.len_utf8();
            out.push(w[..cut].to_string());
            out.push(w[cut..].to_string());
        } else if is_ascii_punct(first) {
            let cut = first.len_utf8();
            out.push(w[..cut].to_string());
            out.push(w[cut..].to_string());
        } else {
            out.push(w.to_string());
        }
    }
    out
}

fn char_ngram_counts(line: &str, n: usize) -> HashMap<String, u64> {
    let squeezed: String = line.split_whitespace().collect();
    let chars: Vec<char> = squeezed.chars().collect();
    let mut counts = HashMap::new();
    if chars.len() < n {
        return counts;
    }
    for window in chars.windows(n) {
        *counts.entry(window.iter().collect::<String>()).or_insert(0) += 1;
    }
    counts
}

fn word_ngram_counts(tokens: &[String], n: usize) -> HashMap<String, u64> {
    let mut counts = HashMap::new();
    if tokens.len() < n {
        return counts;
    }
    for window in tokens.windows(n) {
        *counts.entry(window.join(" ")).or_insert(0) += 1;
    }
    counts
}

fn accumulate(
    totals: &mut [[u64; 3]; TOTAL_ORDERS],
    order: usize,
    hyp: &HashMap<String, u64>,
    reference: &HashMap<String, u64>,
) {
    let mut matches = 0;
    let mut hyp_count = 0;
    for (ngram, count) in hyp {
        hyp_count += count;
        if let Some(ref_count) = reference.get(ngram) {
            matches += count.min(ref_count);
        }
    }
    totals[order][0] += hyp_count;
    totals[order][1] += reference.values().sum::<u64>();
    totals[order][2] += matches;
}

pub fn chrfpp<H: AsRef<str>, R: AsRef<str>>(
    hypotheses: &[H],
    references: &[R],
) -> Result<ChrfScore, MetricsError> {
    if hypotheses.len() != references.len() {
        return Err(MetricsError::LengthMismatch {
            hypotheses: hypotheses.len(),
            references: references.len(),
        });
    }
    if hypotheses.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }

    let mut totals = [[0u64; 3]; TOTAL_ORDERS];
    for (hyp, reference) in hypotheses.iter().zip(references) {
        let hyp = hyp.as_ref();
        let reference = reference.as_ref();
        for n in 1..=CHRF_CHAR_ORDER {
            accumulate(
                &mut totals,
                n - 1,
                &char_ngram_counts(hyp, n),
                &char_ngram_counts(reference, n),
            );
        }
        let hyp_words = chrf_words(hyp);
        let ref_words = chrf_words(reference);
        for n in 1..=CHRF_WORD_ORDER {
            accumulate(
                &mut totals,
                CHRF_CHAR_ORDER + n - 1,
                &word_ngram_counts(&hyp_words, n),
                &word_ngram_counts(&ref_words, n),
            );
        }
    }

    let factor = CHRF_BETA * CHRF_BETA;
    let mut avg_prec = 0.0;
    let mut avg_rec = 0.0;
    let mut effective = 0usize;
    for [n_hyp, n_ref, n_match] in totals {
        if n_hyp > 0 && n_ref > 0 {
            avg_prec += n_match as f64 / n_hyp as f64;
            avg_rec += n_match as f64 / n_ref as f64;
            effective += 1;
        }
    }

    let score = if effective == 0 {
        0.0
    } else {
        let avg_prec = avg_prec / effective as f64;
        let avg_rec = avg_rec / effective as f64;
        if avg_prec + avg_rec == 0.0 {
            0.0
        } else {
            100.0 * (1.0 + factor) * avg_prec * avg_rec / (factor * avg_prec + avg_rec)
        }
    };

    Ok(ChrfScore {
        score,
        char_order: CHRF_CHAR_ORDER,
        word_order: CHRF_WORD_ORDER,
        beta: CHRF_BETA,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_corpora_score_exactly_100() {
        let texts = ["cat", "ছাত্ররা বিদ্যালয়ে গিয়েছিল।"];
        assert_eq!(chrfpp(&texts, &texts).unwrap().score, 100.0);
    }

    #[test]
    fn disjoint_characters_score_exactly_zero() {
        assert_eq!(chrfpp(&["abc def"], &["xyz uvw"]).unwrap().score, 0.0);
    }

    #[test]
    fn two_character_example_matches_hand_computation() {
        // char-1: p = r = 1/2; char-2 and word-1: p = r = 0
        // three effective orders -> avg 1/6 -> F2 = 100/6
        let got = chrfpp(&["ab"], &["ac"]).unwrap();
        assert!((got.score - 100.0 / 6.0).abs() < 1e-9, "{}", got.score);
    }

    #[test]
    fn char_ngrams_cross_word_boundaries() {
        // whitespace is stripped before character n-grams, so "a b" and
        // "ab" have identical character statistics but different word stats
        let with_space = chrfpp(&["a b"], &["ab"]).unwrap();
        assert!(with_space.score > 0.0);
    }

    #[test]
    fn word_tokens_peel_one_edge_punctuation() {
        assert_eq!(chrf_words("1996. end"), vec!["1996", ".", "end"]);
        assert_eq!(chrf_words("(start rest"), vec!["(", "start", "rest"]);
        assert_eq!(chrf_words("-2"), vec!["-", "2"]);
        assert_eq!(chrf_words("a"), vec!["a"]);
        // only one character is peeled, matching the reference tokenizer
        assert_eq!(chrf_words("word.."), vec!["word.", "."]);
    }

    #[test]
    fn parameters_are_reported() {
        let got = chrfpp(&["x"], &["x"]).unwrap();
        assert_eq!(
            (got.char_order, got.word_order, got.beta),
            (6, 2, 2.0)
        );
    }

    #[test]
    fn mismatched_lengths_error() {
        assert!(matches!(
            chrfpp(&["a"], &["a", "b"]).unwrap_err(),
            MetricsError::LengthMismatch { .. }
        ));
    }
}
