//! Interleaved gloss annotation and its inverse.
//!
//! `annotate_interleaved` walks the word tokens of a text left to right and,
//! after each longest dictionary match, inserts the English gloss as
//! `" (gloss)"` immediately after the matched words. Inserted glosses are
//! never re-matched, and non-word tokens pass through untouched.
//! `strip_annotations` removes exactly such groups, restoring the original
//! text (glosses are paren-escaped at lexicon load, so groups never nest).

use thiserror::Error;

use crate::lexicon::{Lexicon, LexiconEntry};
use crate::segmenter::{segment, TokenKind};

/// One inserted gloss: where it anchors in the original text and what it says.
#[derive(Debug, Clone, PartialEq)]
pub struct Insertion {
    /// Byte span in the original text covering the matched source words.
    pub anchor_span: (usize, usize),
    pub gloss: String,
    pub entry: LexiconEntry,
}

/// Result of annotating a text against a lexicon.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedText {
    pub text: String,
    pub insertions: Vec<Insertion>,
    pub original: String,
}

/// Annotate `text` by inserting `" (gloss)"` after every longest dictionary
/// match, scanning word tokens left to right in a single pass.
pub fn annotate_interleaved(text: &str, lexicon: &Lexicon) -> AnnotatedText {
    let tokens = segment(text);
    let word_positions: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| t.kind == TokenKind::Word)
        .map(|(i, _)| i)
        .collect();
    let words: Vec<&str> = word_positions.iter().map(|&i| tokens[i].text).collect();

    let mut out = String::with_capacity(text.len());
    let mut insertions = Vec::new();
    let mut copied_until = 0;
    let mut i = 0;
    while i < words.len() {
        let matched = lexicon
            .lookup_longest(&words, i)
            .expect("start index in range");
        match matched {
            Some((len, entry)) => {
                let first = &tokens[word_positions[i]];
                let last = &tokens[word_positions[i + len - 1]];
                out.push_str(&text[copied_until..last.end]);
                out.push_str(" (");
                out.push_str(&entry.gloss);
                out.push(')');
                copied_until = last.end;
                insertions.push(Insertion {
                    anchor_span: (first.start, last.end),
                    gloss: entry.gloss.clone(),
                    entry: entry.clone(),
                });
                i += len;
            }
            None => i += 1,
        }
    }
    out.push_str(&text[copied_until..]);

    AnnotatedText {
        text: out,
        insertions,
        original: text.to_string(),
    }
}

/// List each matched `source_surface: gloss` pair, one per line, in
/// first-occurrence order, without repeats. Used by the block-dictionary
/// baseline that places the whole dictionary before the question.
pub fn render_dictionary_block(text: &str, lexicon: &Lexicon) -> String {
    let annotated = annotate_interleaved(text, lexicon);
    let mut seen = Vec::new();
    let mut lines = Vec::new();
    for insertion in &annotated.insertions {
        if seen.contains(&&insertion.entry.normalized_key) {
            continue;
        }
        seen.push(&insertion.entry.normalized_key);
        lines.push(format!(
            "{}: {}",
            insertion.entry.source_surface, insertion.entry.gloss
        ));
    }
    lines.join("\n")
}

/// Remove every inserted `" (gloss)"` group, restoring the original text.
///
/// A group is a space, an opening parenthesis, paren-free content, and a
/// closing parenthesis; that is exactly the shape `annotate_interleaved`
/// emits (glosses are escaped at load). An opening `" ("` with no closing
/// parenthesis is an error.
pub fn strip_annotations(annotated: &str) -> Result<String, AnnotatorError> {
    let mut out = String::with_capacity(annotated.len());
    let mut rest = annotated;
    let mut consumed = 0;
    while let Some(pos) = rest.find(" (") {
        let content_start = pos + 2;
        match rest[content_start..].find(['(', ')']) {
            Some(rel) => {
                let delim = rest[content_start + rel..].chars().next().unwrap();
                if delim == ')' {
                    out.push_str(&rest[..pos]);
                    let after = content_start + rel + 1;
                    consumed += after;
                    rest = &rest[after..];
                } else {
                    // nested open parenthesis: not an inserted group
                    out.push_str(&rest[..content_start]);
                    consumed += content_start;
                    rest = &rest[content_start..];
                }
            }
            None => {
                return Err(AnnotatorError::UnbalancedParenthesis {
                    offset: consumed + pos,
                })
            }
        }
    }
    out.push_str(rest);
    Ok(out)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnnotatorError {
    #[error("unbalanced parenthesis in annotated text at byte {offset}")]
    UnbalancedParenthesis { offset: usize },
}
