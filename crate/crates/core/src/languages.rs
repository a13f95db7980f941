//! Display names for FLORES-200-style language codes.

use once_cell::sync::Lazy;
use std::collections::HashMap;

static TABLE: Lazy<HashMap<&'static str, &'static str>> = Lazy::new(|| {
    include_str!("data/flores200.tsv")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (code, name) = l
                .split_once('\t')
                .expect("flores200.tsv lines are code<TAB>name");
            (code, name)
        })
        .collect()
});

/// Human-readable name for a language code, e.g. `bug_Latn` → `Buginese`.
pub fn language_name(code: &str) -> Option<&'static str> {
    TABLE.get(code).copied()
}

/// All codes in the bundled table, sorted.
pub fn known_codes() -> Vec<&'static str> {
    let mut codes: Vec<&'static str> = TABLE.keys().copied().collect();
    codes.sort_unstable();
    codes
}
