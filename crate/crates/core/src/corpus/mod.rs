//! Annotated superlative corpora.
//!
//! One JSON object per line:
//!
//! ```text
//! {"id": "...", "domain": "Wikipedia", "doc_text": "...",
//!  "sentence_span": [start, end], "trigger_span": [start, end],
//!  "is_superlative": true,
//!  "frame": {"target": "...", "cs": "...", "anchor": {"index": 2, "role": "ASSET"},
//!            "property": "...", "orientation": "positive", "rank": 1,
//!            "implicit": false, "amount": null, "semantic_type": "relative_eventive"}}
//! ```
//!
//! Spans are character offsets into `doc_text`, end exclusive. `target` and
//! `cs` are frame-notation strings. `semantic_type` is optional.

mod discourse;
mod split;
mod stats;

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use discourse::{implicit_arg_rate, np_relation_overlap, parse_relations, NpRelation, Rate};
pub use split::{split, SplitOptions, Splits};
pub use stats::{percent, ranked, stats, CorpusStats, DomainRow};

use crate::frame::{validate_frame, RoleInventory, Severity, SuperlativeFrame};
use crate::text::{char_len, char_slice};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("split fractions must sum to 1 (got {0})")]
    Fractions(f64),
    #[error("malformed relation row at line {line}: {message}")]
    MalformedRelation { line: usize, message: String },
}

/// Source domain of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    #[serde(alias = "wikipedia")]
    Wikipedia,
    #[serde(alias = "reviews")]
    Reviews,
    #[serde(alias = "dialogue")]
    Dialogue,
    #[serde(alias = "literature")]
    Literature,
    #[serde(alias = "wikinews")]
    Wikinews,
}

impl Domain {
    pub const ALL: [Domain; 5] = [
        Domain::Wikipedia,
        Domain::Reviews,
        Domain::Dialogue,
        Domain::Literature,
        Domain::Wikinews,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Domain::Wikipedia => "Wikipedia",
            Domain::Reviews => "Reviews",
            Domain::Dialogue => "Dialogue",
            Domain::Literature => "Literature",
            Domain::Wikinews => "Wikinews",
        }
    }

    pub fn index(self) -> usize {
        Domain::ALL.iter().position(|d| *d == self).expect("listed domain")
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Domain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Domain::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown domain {s:?}"))
    }
}

/// Character span `[start, end)`; serialized as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }
}

impl From<[usize; 2]> for Span {
    fn from([start, end]: [usize; 2]) -> Self {
        Span { start, end }
    }
}

impl From<Span> for [usize; 2] {
    fn from(s: Span) -> Self {
        [s.start, s.end]
    }
}

/// A superlative candidate with its document, domain and (for superlative
/// readings) its frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedInstance {
    pub id: String,
    pub domain: Domain,
    pub doc_text: String,
    pub sentence_span: Span,
    pub trigger_span: Span,
    pub is_superlative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<SuperlativeFrame>,
}

impl AnnotatedInstance {
    /// The superlative's own sentence.
    pub fn sentence(&self) -> &str {
        char_slice(&self.doc_text, self.sentence_span.start, self.sentence_span.end).unwrap_or("")
    }

    /// Surface text of the trigger.
    pub fn trigger(&self) -> &str {
        char_slice(&self.doc_text, self.trigger_span.start, self.trigger_span.end).unwrap_or("")
    }

    /// True when the comparison set is an event.
    pub fn is_eventive(&self) -> bool {
        self.frame.as_ref().is_some_and(|f| f.cs.is_eventive())
    }

    pub fn is_implicit(&self) -> bool {
        self.frame.as_ref().is_some_and(|f| f.implicit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IssueKind {
    /// The line is not valid JSON for the schema (frame notation included).
    Malformed,
    /// Structural schema rule, e.g. frame presence or span bounds.
    Schema,
    /// A frame invariant reported by validation.
    Validation,
}

/// One problem found while loading, tied to a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadIssue {
    pub line: usize,
    pub kind: IssueKind,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for LoadIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "line {}: {sev}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub issues: Vec<LoadIssue>,
}

impl LoadReport {
    /// Error-severity issues.
    pub fn violations(&self) -> impl Iterator<Item = &LoadIssue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &LoadIssue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }

    /// No error-severity issues (warnings are allowed).
    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub roles: RoleInventory,
    /// Strict frame validation (unknown roles and anchor problems are errors).
    pub strict: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            roles: RoleInventory::default(),
            strict: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub instances: Vec<AnnotatedInstance>,
    pub report: LoadReport,
}

/// Reads a corpus file. Only I/O failures are errors; every line-level
/// problem goes into the report.
pub fn load(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(load_str(&text, options))
}

/// Parses corpus JSONL. Lines that fail to parse or break a structural
/// schema rule are left out; frames with validation violations are kept and
/// reported.
pub fn load_str(text: &str, options: &LoadOptions) -> Corpus {
    let mut corpus = Corpus::default();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let issue = |kind, severity, message: String| LoadIssue {
            line,
            kind,
            severity,
            message,
        };
        let inst: AnnotatedInstance = match serde_json::from_str(raw) {
            Ok(inst) => inst,
            Err(e) => {
                corpus
                    .report
                    .issues
                    .push(issue(IssueKind::Malformed, Severity::Error, e.to_string()));
                continue;
            }
        };
        let schema = schema_errors(&inst);
        let duplicate = !seen.insert(inst.id.clone());
        if !schema.is_empty() || duplicate {
            for message in schema {
                corpus
                    .report
                    .issues
                    .push(issue(IssueKind::Schema, Severity::Error, message));
            }
            if duplicate {
                corpus.report.issues.push(issue(
                    IssueKind::Schema,
                    Severity::Error,
                    format!("duplicate id {:?}", inst.id),
                ));
            }
            continue;
        }
        if let Some(frame) = &inst.frame {
            for v in validate_frame(frame, &options.roles, options.strict) {
                corpus.report.issues.push(issue(
                    IssueKind::Validation,
                    v.severity,
                    format!("{}: {}: {}", inst.id, v.field, v.message),
                ));
            }
        }
        corpus.instances.push(inst);
    }
    corpus
}

fn schema_errors(inst: &AnnotatedInstance) -> Vec<String> {
    let mut out = Vec::new();
    match (inst.is_superlative, &inst.frame) {
        (true, None) => out.push(format!("{}: is_superlative=true requires a frame", inst.id)),
        (false, Some(_)) => out.push(format!("{}: is_superlative=false must not carry a frame", inst.id)),
        _ => {}
    }
    let len = char_len(&inst.doc_text);
    let (s, t) = (inst.sentence_span, inst.trigger_span);
    if s.start > s.end || s.end > len {
        out.push(format!(
            "{}: sentence_span {:?} outside document of length {len}",
            inst.id,
            [s.start, s.end]
        ));
    } else if t.start > t.end || t.start < s.start || t.end > s.end {
        out.push(format!(
            "{}: trigger_span {:?} outside sentence_span",
            inst.id,
            [t.start, t.end]
        ));
    }
    if inst.id.is_empty() {
        out.push("empty id".to_string());
    }
    out
}

/// Serializes instances as corpus JSONL (one line each, trailing newline).
pub fn export(instances: &[AnnotatedInstance]) -> String {
    let mut out = String::new();
    for inst in instances {
        out.push_str(&serde_json::to_string(inst).expect("instances serialize"));
        out.push('\n');
    }
    out
}

pub fn write_jsonl(path: impl AsRef<Path>, instances: &[AnnotatedInstance]) -> Result<(), CorpusError> {
    let path = path.as_ref();
    std::fs::write(path, export(instances)).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}
