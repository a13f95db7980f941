//! Splits source-language text into classified spans.
//!
//! Segmentation follows default Unicode word-boundary rules; every byte of
//! the input is covered by exactly one token, so concatenating token texts
//! reproduces the input unchanged.

use once_cell::sync::Lazy;
use regex::Regex;
use unicode_segmentation::UnicodeSegmentation;

/// What a span of text is, for the purpose of dictionary matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Number,
    Punctuation,
    Whitespace,
}

/// A classified span of the original text. `start`/`end` are byte offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub kind: TokenKind,
    pub start: usize,
    pub end: usize,
}

static LEADING_MARK: Lazy<Regex> = Lazy::new(|| Regex::new(r"\A\p{M}").unwrap());

fn is_number(piece: &str) -> bool {
    let mut chars = piece.chars();
    let first = match chars.next() {
        Some(c) => c,
        None => return false,
    };
    if !first.is_numeric() {
        return false;
    }
    let last = piece.chars().last().unwrap();
    if !last.is_numeric() {
        return false;
    }
    piece.chars().all(|c| c.is_numeric() || c == '.' || c == ',')
}

fn classify(piece: &str) -> TokenKind {
    if piece.chars().all(char::is_whitespace) {
        return TokenKind::Whitespace;
    }
    if is_number(piece) {
        return TokenKind::Number;
    }
    let first = piece.chars().next().expect("non-empty piece");
    if first.is_alphabetic() || LEADING_MARK.is_match(piece) {
        TokenKind::Word
    } else {
        TokenKind::Punctuation
    }
}

/// Segment `text` into tokens covering the whole input.
pub fn segment(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut offset = 0;
    for piece in text.split_word_bounds() {
        let start = offset;
        offset += piece.len();
        tokens.push(Token {
            text: piece,
            kind: classify(piece),
            start,
            end: offset,
        });
    }
    tokens
}
