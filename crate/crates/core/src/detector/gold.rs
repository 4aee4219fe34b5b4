//! Hand-marked detector fixtures.
//!
//! One sentence per line; `#` lines are comments. `[word]` marks a
//! superlative trigger, `{word}` a quantifier use that must be detected and
//! flagged.

use serde::{Deserialize, Serialize};

use super::{Detector, Sentence};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedSentence {
    pub line: usize,
    /// The sentence with markers removed.
    pub text: String,
    /// Character spans of `[...]` triggers.
    pub triggers: Vec<(usize, usize)>,
    /// Character spans of `{...}` quantifier uses.
    pub quantifiers: Vec<(usize, usize)>,
}

/// Strips markers from every non-comment, non-blank line.
pub fn parse_marked(text: &str) -> Result<Vec<MarkedSentence>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let mut m = MarkedSentence {
            line,
            text: String::new(),
            triggers: Vec::new(),
            quantifiers: Vec::new(),
        };
        let mut open: Option<(char, usize)> = None;
        let mut len = 0;
        for c in raw.trim().chars() {
            match (c, open) {
                ('[' | '{', None) => open = Some((c, len)),
                (']', Some(('[', s))) => {
                    m.triggers.push((s, len));
                    open = None;
                }
                ('}', Some(('{', s))) => {
                    m.quantifiers.push((s, len));
                    open = None;
                }
                ('[' | '{' | ']' | '}', _) => return Err(format!("line {line}: unbalanced marker")),
                _ => {
                    m.text.push(c);
                    len += 1;
                }
            }
        }
        if open.is_some() {
            return Err(format!("line {line}: unclosed marker"));
        }
        out.push(m);
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RecallReport {
    pub sentences: usize,
    pub triggers: usize,
    pub found: usize,
    pub quantifiers: usize,
    /// Quantifier uses detected and flagged.
    pub quantifiers_flagged: usize,
    /// Unflagged candidates on unmarked tokens.
    pub extra: usize,
    /// `line: surface` of every missed trigger or unflagged quantifier.
    pub misses: Vec<String>,
}

impl RecallReport {
    pub fn recall(&self) -> f64 {
        if self.triggers == 0 {
            1.0
        } else {
            self.found as f64 / self.triggers as f64
        }
    }

    pub fn flag_rate(&self) -> f64 {
        if self.quantifiers == 0 {
            1.0
        } else {
            self.quantifiers_flagged as f64 / self.quantifiers as f64
        }
    }
}

/// Runs candidate detection and filtering on each marked sentence.
pub fn evaluate_recall(detector: &Detector, sentences: &[MarkedSentence]) -> RecallReport {
    let mut r = RecallReport {
        sentences: sentences.len(),
        ..Default::default()
    };
    for m in sentences {
        let sentence = Sentence {
            index: 0,
            start: 0,
            end: m.text.chars().count(),
            text: m.text.clone(),
        };
        let cands = detector.filter_non_superlative(detector.detect_candidates(&sentence), &sentence);
        let surface = |(s, e): (usize, usize)| m.text.chars().skip(s).take(e - s).collect::<String>();
        for &span in &m.triggers {
            r.triggers += 1;
            if cands.iter().any(|c| (c.start, c.end) == span) {
                r.found += 1;
            } else {
                r.misses.push(format!("{}: {}", m.line, surface(span)));
            }
        }
        for &span in &m.quantifiers {
            r.quantifiers += 1;
            if cands.iter().any(|c| (c.start, c.end) == span && c.filtered) {
                r.quantifiers_flagged += 1;
            } else {
                r.misses.push(format!("{}: {} (unflagged)", m.line, surface(span)));
            }
        }
        r.extra += cands
            .iter()
            .filter(|c| !c.filtered && !m.triggers.contains(&(c.start, c.end)))
            .count();
    }
    r
}
