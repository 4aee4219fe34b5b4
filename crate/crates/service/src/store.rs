//! In-memory annotation state with an append-only JSONL journal.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use supersem_core::corpus::{AnnotatedInstance, Domain, Span};
use supersem_core::detector::{context_window, Candidate, ContextWindow, Detector, Sentence, SyntacticKind};
use supersem_core::frame::{validate_frame, Violation};
use supersem_core::{RoleInventory, SuperlativeFrame};
use thiserror::Error;

/// One input document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub domain: Domain,
    pub text: String,
}

/// A candidate that can be annotated, with its fixed spans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub doc_id: String,
    pub domain: Domain,
    pub candidate: Candidate,
    pub sentence_span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Unseen,
    Skipped,
    MarkedNonSuperlative,
    Annotated,
}

/// One annotator's current state for one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub status: Status,
    pub revision: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<SuperlativeFrame>,
    /// Global write sequence number of the last accepted write.
    pub seq: u64,
}

impl Annotation {
    fn unseen() -> Self {
        Annotation {
            status: Status::Unseen,
            revision: 0,
            frame: None,
            seq: 0,
        }
    }

    /// Annotated or marked non-superlative.
    pub fn is_decided(&self) -> bool {
        matches!(self.status, Status::Annotated | Status::MarkedNonSuperlative)
    }
}

/// What a write stores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Action {
    Frame(SuperlativeFrame),
    NonSuperlative,
    Skip,
}

/// A journal line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalEntry {
    pub seq: u64,
    pub annotator: String,
    pub instance_id: String,
    pub revision: u64,
    pub action: Action,
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("unknown instance {0:?}")]
    UnknownInstance(String),
    #[error("unknown document {0:?}")]
    UnknownDocument(String),
    #[error("revision conflict: expected {expected}, current {current}")]
    Conflict { expected: u64, current: u64 },
    #[error("frame has validation violations")]
    Invalid {
        violations: Vec<Violation>,
        override_allowed: bool,
    },
    #[error("duplicate id {0:?}")]
    Duplicate(String),
    #[error("{0}")]
    Input(String),
    #[error("journal {path}: {message}")]
    Journal { path: String, message: String },
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone)]
pub struct StoreConfig {
    pub roles: RoleInventory,
    /// Strict validation turns role and anchor issues into errors.
    pub strict: bool,
    /// Default context window in sentences.
    pub window_before: usize,
    pub window_after: usize,
    pub journal: Option<PathBuf>,
    /// Compact the journal after this many appended entries.
    pub compact_every: Option<usize>,
}

impl Default for StoreConfig {
    fn default() -> Self {
        StoreConfig {
            roles: RoleInventory::default(),
            strict: true,
            window_before: 2,
            window_after: 1,
            journal: None,
            compact_every: Some(1000),
        }
    }
}

/// Result of an accepted write.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WriteOutcome {
    pub instance_id: String,
    pub annotator: String,
    pub status: Status,
    pub revision: u64,
    pub warnings: Vec<Violation>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub annotator: String,
    pub assigned: usize,
    pub unseen: usize,
    pub skipped: usize,
    pub marked_non_superlative: usize,
    pub annotated: usize,
}

#[derive(Default)]
struct State {
    /// annotator -> instance id -> annotation
    annotations: BTreeMap<String, BTreeMap<String, Annotation>>,
    assignments: BTreeMap<String, BTreeSet<String>>,
    seq: u64,
    appended: usize,
}

struct Journal {
    path: PathBuf,
    file: BufWriter<File>,
}

/// Documents, candidates and every annotator's writes.
pub struct Store {
    config: StoreConfig,
    documents: Vec<Document>,
    doc_index: BTreeMap<String, usize>,
    sentences: BTreeMap<String, Vec<Sentence>>,
    instances: Vec<InstanceRecord>,
    instance_index: BTreeMap<String, usize>,
    state: RwLock<State>,
    journal: Mutex<Option<Journal>>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Instance id for a candidate: `doc:start-end`.
pub fn instance_id(c: &Candidate) -> String {
    format!("{}:{}-{}", c.doc_id, c.start, c.end)
}

impl Store {
    /// Runs the detector over `documents`.
    pub fn from_documents(
        documents: Vec<Document>,
        detector: &Detector,
        config: StoreConfig,
    ) -> Result<Self, StoreError> {
        let candidates = documents
            .iter()
            .flat_map(|d| detector.detect_document(&d.id, &d.text))
            .collect();
        Self::from_candidates(documents, candidates, detector, config)
    }

    /// Uses precomputed detector output.
    pub fn from_candidates(
        documents: Vec<Document>,
        candidates: Vec<Candidate>,
        detector: &Detector,
        config: StoreConfig,
    ) -> Result<Self, StoreError> {
        let sentences: BTreeMap<String, Vec<Sentence>> = documents
            .iter()
            .map(|d| (d.id.clone(), detector.segment(&d.text)))
            .collect();
        let mut store = Self::empty(documents, sentences, config)?;
        for c in candidates {
            let doc = store
                .document(&c.doc_id)
                .ok_or_else(|| StoreError::UnknownDocument(c.doc_id.clone()))?;
            let domain = doc.domain;
            let sentence = store.sentences[&c.doc_id].get(c.sentence_index).ok_or_else(|| {
                StoreError::Input(format!(
                    "candidate {} has no sentence {}",
                    instance_id(&c),
                    c.sentence_index
                ))
            })?;
            let record = InstanceRecord {
                id: instance_id(&c),
                doc_id: c.doc_id.clone(),
                domain,
                sentence_span: Span::new(sentence.start, sentence.end),
                candidate: c,
            };
            store.push_instance(record)?;
        }
        store.open_journal()?;
        Ok(store)
    }

    /// Imports a corpus; each decided instance becomes a write by `annotator`.
    pub fn from_corpus(
        corpus: &[AnnotatedInstance],
        annotator: &str,
        detector: &Detector,
        config: StoreConfig,
    ) -> Result<Self, StoreError> {
        let mut documents: Vec<Document> = Vec::new();
        let mut by_text: BTreeMap<&str, usize> = BTreeMap::new();
        let mut doc_of = Vec::new();
        for inst in corpus {
            let k = *by_text.entry(inst.doc_text.as_str()).or_insert_with(|| {
                documents.push(Document {
                    id: inst.id.clone(),
                    domain: inst.domain,
                    text: inst.doc_text.clone(),
                });
                documents.len() - 1
            });
            doc_of.push(k);
        }
        let sentences: BTreeMap<String, Vec<Sentence>> = documents
            .iter()
            .map(|d| (d.id.clone(), detector.segment(&d.text)))
            .collect();
        let mut store = Self::empty(documents, sentences, config)?;
        for (inst, k) in corpus.iter().zip(doc_of) {
            let doc_id = store.documents[k].id.clone();
            let sentence_index = store.sentences[&doc_id]
                .iter()
                .position(|s| s.start <= inst.trigger_span.start && inst.trigger_span.end <= s.end)
                .unwrap_or(0);
            let surface = inst.trigger().to_string();
            let kind = if surface.to_lowercase().ends_with("est") {
                SyntacticKind::Adjectival
            } else {
                SyntacticKind::Lexical
            };
            let record = InstanceRecord {
                id: inst.id.clone(),
                doc_id: doc_id.clone(),
                domain: inst.domain,
                sentence_span: inst.sentence_span,
                candidate: Candidate {
                    doc_id,
                    sentence_index,
                    start: inst.trigger_span.start,
                    end: inst.trigger_span.end,
                    surface,
                    kind,
                    filtered: !inst.is_superlative,
                    reason: None,
                },
            };
            store.push_instance(record)?;
        }
        store.open_journal()?;
        for inst in corpus {
            let action = match &inst.frame {
                Some(frame) => Action::Frame(frame.clone()),
                None => Action::NonSuperlative,
            };
            let current = store.annotation(annotator, &inst.id).revision;
            store.write(annotator, &inst.id, current, action, true)?;
        }
        Ok(store)
    }

    fn empty(
        documents: Vec<Document>,
        sentences: BTreeMap<String, Vec<Sentence>>,
        config: StoreConfig,
    ) -> Result<Self, StoreError> {
        let mut doc_index = BTreeMap::new();
        for (i, d) in documents.iter().enumerate() {
            if doc_index.insert(d.id.clone(), i).is_some() {
                return Err(StoreError::Duplicate(d.id.clone()));
            }
        }
        Ok(Store {
            config,
            documents,
            doc_index,
            sentences,
            instances: Vec::new(),
            instance_index: BTreeMap::new(),
            state: RwLock::new(State::default()),
            journal: Mutex::new(None),
        })
    }

    fn push_instance(&mut self, record: InstanceRecord) -> Result<(), StoreError> {
        if self
            .instance_index
            .insert(record.id.clone(), self.instances.len())
            .is_some()
        {
            return Err(StoreError::Duplicate(record.id));
        }
        self.instances.push(record);
        Ok(())
    }

    /// Replays an existing journal, then keeps it open for appends.
    fn open_journal(&mut self) -> Result<(), StoreError> {
        let Some(path) = self.config.journal.clone() else {
            return Ok(());
        };
        if path.exists() {
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let mut state = self.state.write();
            for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
                let entry: JournalEntry = serde_json::from_str(line).map_err(|e| StoreError::Journal {
                    path: path.display().to_string(),
                    message: format!("line {}: {e}", i + 1),
                })?;
                if !self.instance_index.contains_key(&entry.instance_id) {
                    return Err(StoreError::Journal {
                        path: path.display().to_string(),
                        message: format!("line {}: unknown instance {:?}", i + 1, entry.instance_id),
                    });
                }
                apply(&mut state, &entry);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err(&path))?;
        *self.journal.lock() = Some(Journal {
            path,
            file: BufWriter::new(file),
        });
        Ok(())
    }

    pub fn config(&self) -> &StoreConfig {
        &self.config
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn document(&self, id: &str) -> Option<&Document> {
        self.doc_index.get(id).map(|&i| &self.documents[i])
    }

    pub fn instances(&self) -> &[InstanceRecord] {
        &self.instances
    }

    pub fn instance(&self, id: &str) -> Option<&InstanceRecord> {
        self.instance_index.get(id).map(|&i| &self.instances[i])
    }

    /// Candidates of one document, or of all documents.
    pub fn candidates(&self, doc: Option<&str>) -> Result<Vec<&Candidate>, StoreError> {
        if let Some(d) = doc {
            if self.document(d).is_none() {
                return Err(StoreError::UnknownDocument(d.to_string()));
            }
        }
        Ok(self
            .instances
            .iter()
            .filter(|r| doc.is_none_or(|d| r.doc_id == d))
            .map(|r| &r.candidate)
            .collect())
    }

    pub fn context(&self, id: &str, before: usize, after: usize) -> Result<ContextWindow, StoreError> {
        let rec = self
            .instance(id)
            .ok_or_else(|| StoreError::UnknownInstance(id.to_string()))?;
        let doc = self.document(&rec.doc_id).expect("instance documents exist");
        context_window(
            &self.sentences[&rec.doc_id],
            &doc.text,
            rec.candidate.sentence_index,
            before,
            after,
        )
        .map_err(|e| StoreError::Input(e.to_string()))
    }

    /// Restricts an annotator to the given instances. Annotators without an
    /// assignment see every instance.
    pub fn assign(&self, annotator: &str, ids: impl IntoIterator<Item = String>) -> Result<(), StoreError> {
        let ids: BTreeSet<String> = ids.into_iter().collect();
        if let Some(bad) = ids.iter().find(|id| !self.instance_index.contains_key(*id)) {
            return Err(StoreError::UnknownInstance(bad.clone()));
        }
        self.state.write().assignments.insert(annotator.to_string(), ids);
        Ok(())
    }

    pub fn annotation(&self, annotator: &str, id: &str) -> Annotation {
        self.state
            .read()
            .annotations
            .get(annotator)
            .and_then(|m| m.get(id))
            .cloned()
            .unwrap_or_else(Annotation::unseen)
    }

    /// Every annotator's entry for one instance.
    pub fn annotations_for(&self, id: &str) -> BTreeMap<String, Annotation> {
        self.state
            .read()
            .annotations
            .iter()
            .filter_map(|(who, m)| m.get(id).map(|a| (who.clone(), a.clone())))
            .collect()
    }

    pub fn annotators(&self) -> Vec<String> {
        let state = self.state.read();
        state
            .annotations
            .keys()
            .chain(state.assignments.keys())
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Validates and stores one write.
    ///
    /// Errors are never stored. Warnings are stored only with `override_warnings`.
    /// The write succeeds only when `expected_revision` equals the current
    /// revision, which then increases by one.
    pub fn write(
        &self,
        annotator: &str,
        id: &str,
        expected_revision: u64,
        action: Action,
        override_warnings: bool,
    ) -> Result<WriteOutcome, StoreError> {
        if self.instance(id).is_none() {
            return Err(StoreError::UnknownInstance(id.to_string()));
        }
        let mut warnings = Vec::new();
        if let Action::Frame(frame) = &action {
            let violations = validate_frame(frame, &self.config.roles, self.config.strict);
            let has_errors = violations.iter().any(Violation::is_error);
            if has_errors || (!violations.is_empty() && !override_warnings) {
                return Err(StoreError::Invalid {
                    override_allowed: !has_errors,
                    violations,
                });
            }
            warnings = violations;
        }
        let entry = {
            let mut state = self.state.write();
            let current = state
                .annotations
                .get(annotator)
                .and_then(|m| m.get(id))
                .map_or(0, |a| a.revision);
            if current != expected_revision {
                return Err(StoreError::Conflict {
                    expected: expected_revision,
                    current,
                });
            }
            let entry = JournalEntry {
                seq: state.seq + 1,
                annotator: annotator.to_string(),
                instance_id: id.to_string(),
                revision: current + 1,
                action,
            };
            self.append(&mut state, &entry)?;
            apply(&mut state, &entry);
            entry
        };
        Ok(WriteOutcome {
            instance_id: entry.instance_id,
            annotator: entry.annotator,
            status: status_of(&entry.action),
            revision: entry.revision,
            warnings,
        })
    }

    /// Appends under the state lock so journal order equals `seq` order.
    fn append(&self, state: &mut State, entry: &JournalEntry) -> Result<(), StoreError> {
        let mut guard = self.journal.lock();
        let Some(journal) = guard.as_mut() else { return Ok(()) };
        let line = serde_json::to_string(entry).expect("journal entries serialize");
        writeln!(journal.file, "{line}")
            .and_then(|_| journal.file.flush())
            .map_err(io_err(&journal.path))?;
        state.appended += 1;
        if self.config.compact_every.is_some_and(|n| state.appended >= n) {
            let path = journal.path.clone();
            drop(guard);
            let mut snapshot = State {
                annotations: state.annotations.clone(),
                ..State::default()
            };
            apply(&mut snapshot, entry);
            self.rewrite_journal(&path, &snapshot)?;
            state.appended = 0;
        }
        Ok(())
    }

    /// Rewrites the journal with one entry per (annotator, instance).
    pub fn compact(&self) -> Result<usize, StoreError> {
        let Some(path) = self.journal.lock().as_ref().map(|j| j.path.clone()) else {
            return Ok(0);
        };
        let mut state = self.state.write();
        let n = self.rewrite_journal(&path, &state)?;
        state.appended = 0;
        Ok(n)
    }

    fn rewrite_journal(&self, path: &Path, state: &State) -> Result<usize, StoreError> {
        let mut entries: Vec<JournalEntry> = state
            .annotations
            .iter()
            .flat_map(|(who, m)| {
                m.iter()
                    .filter(|(_, a)| a.status != Status::Unseen)
                    .map(move |(id, a)| JournalEntry {
                        seq: a.seq,
                        annotator: who.clone(),
                        instance_id: id.clone(),
                        revision: a.revision,
                        action: match (a.status, &a.frame) {
                            (Status::Annotated, Some(f)) => Action::Frame(f.clone()),
                            (Status::MarkedNonSuperlative, _) => Action::NonSuperlative,
                            _ => Action::Skip,
                        },
                    })
            })
            .collect();
        entries.sort_by_key(|e| e.seq);
        let tmp = path.with_extension("compact.tmp");
        {
            let mut out = BufWriter::new(File::create(&tmp).map_err(io_err(&tmp))?);
            for e in &entries {
                writeln!(out, "{}", serde_json::to_string(e).expect("journal entries serialize"))
                    .map_err(io_err(&tmp))?;
            }
            out.flush().map_err(io_err(&tmp))?;
        }
        fs::rename(&tmp, path).map_err(io_err(path))?;
        let file = OpenOptions::new().append(true).open(path).map_err(io_err(path))?;
        *self.journal.lock() = Some(Journal {
            path: path.to_path_buf(),
            file: BufWriter::new(file),
        });
        Ok(entries.len())
    }

    /// Corpus instance for one annotator's decided write.
    pub fn to_instance(&self, id: &str, annotation: &Annotation) -> Option<AnnotatedInstance> {
        if !annotation.is_decided() {
            return None;
        }
        let rec = self.instance(id)?;
        let doc = self.document(&rec.doc_id)?;
        Some(AnnotatedInstance {
            id: rec.id.clone(),
            domain: rec.domain,
            doc_text: doc.text.clone(),
            sentence_span: rec.sentence_span,
            trigger_span: Span::new(rec.candidate.start, rec.candidate.end),
            is_superlative: annotation.status == Status::Annotated,
            frame: annotation.frame.clone(),
        })
    }

    /// Decided instances of one annotator, or for each instance the most
    /// recent decided write of any annotator. Instance order follows the
    /// store.
    pub fn export(&self, annotator: Option<&str>) -> Vec<AnnotatedInstance> {
        let state = self.state.read();
        self.instances
            .iter()
            .filter_map(|rec| {
                let chosen = match annotator {
                    Some(a) => state
                        .annotations
                        .get(a)
                        .and_then(|m| m.get(&rec.id))
                        .filter(|x| x.is_decided()),
                    None => state
                        .annotations
                        .values()
                        .filter_map(|m| m.get(&rec.id))
                        .filter(|x| x.is_decided())
                        .max_by_key(|x| x.seq),
                };
                chosen.and_then(|a| self.to_instance(&rec.id, a))
            })
            .collect()
    }

    /// Instances both annotators have decided, paired in store order.
    pub fn overlap(&self, a: &str, b: &str) -> (Vec<AnnotatedInstance>, Vec<AnnotatedInstance>) {
        let state = self.state.read();
        let get = |who: &str, id: &str| {
            state
                .annotations
                .get(who)
                .and_then(|m| m.get(id))
                .filter(|x| x.is_decided())
                .cloned()
        };
        let mut left = Vec::new();
        let mut right = Vec::new();
        for rec in &self.instances {
            if let (Some(x), Some(y)) = (get(a, &rec.id), get(b, &rec.id)) {
                left.extend(self.to_instance(&rec.id, &x));
                right.extend(self.to_instance(&rec.id, &y));
            }
        }
        (left, right)
    }

    pub fn progress(&self) -> Vec<Progress> {
        let state = self.state.read();
        let mut names: BTreeSet<&String> = state.annotations.keys().collect();
        names.extend(state.assignments.keys());
        names
            .into_iter()
            .map(|who| {
                let assigned: Vec<&str> = match state.assignments.get(who) {
                    Some(ids) => ids.iter().map(String::as_str).collect(),
                    None => self.instances.iter().map(|r| r.id.as_str()).collect(),
                };
                let mut p = Progress {
                    annotator: who.clone(),
                    assigned: assigned.len(),
                    ..Progress::default()
                };
                for id in assigned {
                    match state
                        .annotations
                        .get(who)
                        .and_then(|m| m.get(id))
                        .map_or(Status::Unseen, |a| a.status)
                    {
                        Status::Unseen => p.unseen += 1,
                        Status::Skipped => p.skipped += 1,
                        Status::MarkedNonSuperlative => p.marked_non_superlative += 1,
                        Status::Annotated => p.annotated += 1,
                    }
                }
                p
            })
            .collect()
    }
}

fn status_of(action: &Action) -> Status {
    match action {
        Action::Frame(_) => Status::Annotated,
        Action::NonSuperlative => Status::MarkedNonSuperlative,
        Action::Skip => Status::Skipped,
    }
}

fn apply(state: &mut State, entry: &JournalEntry) {
    let frame = match &entry.action {
        Action::Frame(f) => Some(f.clone()),
        _ => None,
    };
    state.annotations.entry(entry.annotator.clone()).or_default().insert(
        entry.instance_id.clone(),
        Annotation {
            status: status_of(&entry.action),
            revision: entry.revision,
            frame,
            seq: entry.seq,
        },
    );
    state.seq = state.seq.max(entry.seq);
}
