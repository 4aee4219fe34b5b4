//! Superlative candidate extraction.
//!
//! Candidates come from three deterministic rules over lowercase word
//! tokens: "-est" forms of a listed adjective/adverb stem (or an irregular
//! form), "most"/"least" directly before an adjective or adverb, and a small
//! list of lexical superlatives. Known non-superlative uses are flagged, never
//! removed, so a human reviewer can override the decision.
//!
//! All offsets are character offsets into the document.

pub mod gold;
mod lexicon;
mod segment;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lexicon::Lexicon;
pub use segment::{segment, Sentence};

use crate::text::char_slice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyntacticKind {
    Adjectival,
    Adverbial,
    Lexical,
}

/// Why a candidate was flagged as a non-superlative use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterReason {
    /// "at least", "at most".
    ProportionalQuantifier,
    /// "most of" followed by a determiner.
    PartitiveQuantifier,
    /// A listed idiom such as "at best".
    Idiom,
}

/// One detected trigger. Serializes to the candidate JSONL record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub doc_id: String,
    pub sentence_index: usize,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub kind: SyntacticKind,
    pub filtered: bool,
    pub reason: Option<FilterReason>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectorError {
    #[error("sentence index {index} out of range ({count} sentences)")]
    SentenceOutOfRange { index: usize, count: usize },
}

/// A window of whole sentences around a candidate, in document offsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextWindow {
    pub start: usize,
    pub end: usize,
    pub text: String,
    /// Span of the candidate's own sentence.
    pub sentence_start: usize,
    pub sentence_end: usize,
}

#[derive(Debug, Clone)]
struct Token {
    start: usize,
    end: usize,
    lower: String,
}

/// Word tokens (alphabetic runs) with character offsets relative to `text`.
fn word_tokens(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut current: Option<(usize, String)> = None;
    let mut count = 0;
    for (i, c) in text.chars().enumerate() {
        count = i + 1;
        if c.is_alphabetic() {
            current.get_or_insert_with(|| (i, String::new())).1.push(c);
        } else if let Some((start, word)) = current.take() {
            out.push(Token {
                start,
                end: i,
                lower: word.to_lowercase(),
            });
        }
    }
    if let Some((start, word)) = current {
        out.push(Token {
            start,
            end: count,
            lower: word.to_lowercase(),
        });
    }
    out
}

const DETERMINERS: [&str; 20] = [
    "the", "a", "an", "this", "that", "these", "those", "my", "your", "his", "her", "its", "our", "their", "them",
    "us", "you", "it", "which", "whom",
];

/// Rule-based detector over a [`Lexicon`].
#[derive(Debug, Clone)]
pub struct Detector {
    lexicon: Lexicon,
}

impl Default for Detector {
    fn default() -> Self {
        Detector::new(Lexicon::bundled())
    }
}

impl Detector {
    pub fn new(lexicon: Lexicon) -> Self {
        Detector { lexicon }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn segment(&self, text: &str) -> Vec<Sentence> {
        segment(text, &self.lexicon.abbreviations)
    }

    /// Flags superlative triggers in one sentence. Offsets are shifted by
    /// `sentence.start`; `doc_id` is left empty and nothing is filtered.
    pub fn detect_candidates(&self, sentence: &Sentence) -> Vec<Candidate> {
        let tokens = word_tokens(&sentence.text);
        let chars: Vec<char> = sentence.text.chars().collect();
        let mut out = Vec::new();
        for (k, tok) in tokens.iter().enumerate() {
            let w = tok.lower.as_str();
            let kind = if self.lexicon.irregulars.contains(w) {
                let analytic = (w == "most" || w == "least")
                    && tokens.get(k + 1).is_some_and(|next| {
                        chars[tok.end..next.start]
                            .iter()
                            .all(|c| c.is_whitespace() || *c == '-')
                            && self.lexicon.is_adjective_or_adverb(&next.lower)
                    });
                if analytic {
                    SyntacticKind::Adverbial
                } else {
                    SyntacticKind::Adjectival
                }
            } else if self.lexicon.is_est_superlative(w) {
                SyntacticKind::Adjectival
            } else if self.lexicon.lexical.contains(w) {
                SyntacticKind::Lexical
            } else {
                continue;
            };
            out.push(Candidate {
                doc_id: String::new(),
                sentence_index: sentence.index,
                start: sentence.start + tok.start,
                end: sentence.start + tok.end,
                surface: chars[tok.start..tok.end].iter().collect(),
                kind,
                filtered: false,
                reason: None,
            });
        }
        out
    }

    /// Marks quantifier and idiom uses. Candidates are never dropped.
    pub fn filter_non_superlative(&self, mut cands: Vec<Candidate>, sentence: &Sentence) -> Vec<Candidate> {
        let tokens = word_tokens(&sentence.text);
        let words: Vec<&str> = tokens.iter().map(|t| t.lower.as_str()).collect();
        for cand in &mut cands {
            let Some(k) = tokens.iter().position(|t| sentence.start + t.start == cand.start) else {
                continue;
            };
            if let Some(reason) = self.filter_reason(&words, k) {
                cand.filtered = true;
                cand.reason = Some(reason);
            }
        }
        cands
    }

    fn filter_reason(&self, words: &[&str], k: usize) -> Option<FilterReason> {
        let w = words[k];
        if (w == "least" || w == "most") && k > 0 && words[k - 1] == "at" {
            return Some(FilterReason::ProportionalQuantifier);
        }
        for idiom in &self.lexicon.idioms {
            for (p, part) in idiom.iter().enumerate() {
                if part != w || p > k || k - p + idiom.len() > words.len() {
                    continue;
                }
                if idiom.iter().zip(&words[k - p..]).all(|(a, b)| a == b) {
                    return Some(FilterReason::Idiom);
                }
            }
        }
        if w == "most" && words.get(k + 1) == Some(&"of") && words.get(k + 2).is_some_and(|d| DETERMINERS.contains(d)) {
            return Some(FilterReason::PartitiveQuantifier);
        }
        None
    }

    /// Segments, detects and filters a whole document.
    pub fn detect_document(&self, doc_id: &str, text: &str) -> Vec<Candidate> {
        self.segment(text)
            .iter()
            .flat_map(|s| {
                let mut cands = self.filter_non_superlative(self.detect_candidates(s), s);
                for c in &mut cands {
                    c.doc_id = doc_id.to_string();
                }
                cands
            })
            .collect()
    }

    /// [`context_window`] around a candidate of `text`.
    pub fn context_window(
        &self,
        text: &str,
        candidate: &Candidate,
        before: usize,
        after: usize,
    ) -> Result<ContextWindow, DetectorError> {
        context_window(&self.segment(text), text, candidate.sentence_index, before, after)
    }
}

/// Whole sentences from `before` sentences ahead of the candidate's to
/// `after` sentences behind it, clamped to the document.
pub fn context_window(
    sentences: &[Sentence],
    text: &str,
    sentence_index: usize,
    before: usize,
    after: usize,
) -> Result<ContextWindow, DetectorError> {
    let own = sentences.get(sentence_index).ok_or(DetectorError::SentenceOutOfRange {
        index: sentence_index,
        count: sentences.len(),
    })?;
    let first = &sentences[sentence_index.saturating_sub(before)];
    let last = &sentences[(sentence_index + after).min(sentences.len() - 1)];
    Ok(ContextWindow {
        start: first.start,
        end: last.end,
        text: char_slice(text, first.start, last.end).unwrap_or_default().to_string(),
        sentence_start: own.start,
        sentence_end: own.end,
    })
}
