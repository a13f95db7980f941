//! Typed final answers shared by the dataset loader, the response parser,
//! and the accuracy scorer.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Absolute tolerance for numeric answer comparison.
pub const NUMERIC_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plausibility {
    Plausible,
    Implausible,
}

impl fmt::Display for Plausibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Plausibility::Plausible => f.write_str("plausible"),
            Plausibility::Implausible => f.write_str("implausible"),
        }
    }
}

/// A typed final answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Answer {
    Numeric { value: f64 },
    Choice { label: String },
    Boolean { value: Plausibility },
    Unparseable,
}

impl Answer {
    pub fn numeric(value: f64) -> Self {
        Answer::Numeric { value }
    }

    pub fn choice(label: impl Into<String>) -> Self {
        Answer::Choice {
            label: label.into(),
        }
    }

    pub fn boolean(value: Plausibility) -> Self {
        Answer::Boolean { value }
    }

    /// Whether this answer matches `gold`: numeric values within the
    /// absolute tolerance, labels and plausibilities exactly, and
    /// unparseable never.
    pub fn matches(&self, gold: &Answer) -> bool {
        match (self, gold) {
            (Answer::Numeric { value: a }, Answer::Numeric { value: b }) => {
                (a - b).abs() <= NUMERIC_TOLERANCE
            }
            (Answer::Choice { label: a }, Answer::Choice { label: b }) => a == b,
            (Answer::Boolean { value: a }, Answer::Boolean { value: b }) => a == b,
            _ => false,
        }
    }
}
