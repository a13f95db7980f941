//! The `13a` tokenization used by corpus BLEU: minimal, language-independent
//! punctuation splitting compatible with the WMT reference tokenizer.

use once_cell::sync::Lazy;
use regex::Regex;

struct Rule {
    pattern: Regex,
    replacement: &'static str,
}

static RULES: Lazy<[Rule; 4]> = Lazy::new(|| {
    [
        // pad ASCII punctuation: { | } ~ [ \ ] ^ _ ` space ! " # $ % &
        // ( ) * + : ; < = > ? @ /  (apostrophe, comma, dash, period excluded)
        Rule {
            pattern: Regex::new(r"([\x7b-\x7e\x5b-\x60\x20-\x26\x28-\x2b\x3a-\x40/])").unwrap(),
            replacement: " ${1} ",
        },
        // period/comma not preceded by a digit
        Rule {
            pattern: Regex::new(r"([^0-9])([\.,])").unwrap(),
            replacement: "${1} ${2} ",
        },
        // period/comma not followed by a digit
        Rule {
            pattern: Regex::new(r"([\.,])([^0-9])").unwrap(),
            replacement: " ${1} ${2}",
        },
        // dash preceded by a digit
        Rule {
            pattern: Regex::new(r"([0-9])(-)").unwrap(),
            replacement: "${1} ${2} ",
        },
    ]
});

pub fn tokenize_13a(line: &str) -> Vec<String> {
    let mut s = line.replace("<skipped>", "");
    s = s.replace("-\n", "");
    s = s.replace('\n', " ");
    if s.contains('&') {
        s = s
            .replace("&quot;", "\"")
            .replace("&amp;", "&")
            .replace("&lt;", "<")
            .replace("&gt;", ">");
    }
    let mut s = format!(" {s} ");
    for rule in RULES.iter() {
        s = rule.pattern.replace_all(&s, rule.replacement).into_owned();
    }
    s.split_whitespace().map(str::to_string).collect()
}
