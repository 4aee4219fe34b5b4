use serde::{Deserialize, Serialize};

use super::{AnnotatedInstance, CorpusError};
use crate::text::key_contains;

/// A count ratio; the ratio is undefined for an empty denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rate {
    pub numerator: usize,
    pub denominator: usize,
}

impl Rate {
    pub fn ratio(&self) -> Option<f64> {
        (self.denominator > 0).then(|| self.numerator as f64 / self.denominator as f64)
    }
}

/// An NP-NP relation, e.g. `largest single language` -of-> `Wikipedia editions`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpRelation {
    pub instance_id: String,
    pub np_a: String,
    pub preposition: String,
    pub np_b: String,
}

/// Parses tab-separated `instance_id  np_a  preposition  np_b` rows. Blank
/// lines and `#` comments are skipped.
pub fn parse_relations(text: &str) -> Result<Vec<NpRelation>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 4 || fields.iter().any(|f| f.is_empty()) {
            return Err(CorpusError::MalformedRelation {
                line: i + 1,
                message: format!("expected 4 non-empty tab-separated fields, got {}", fields.len()),
            });
        }
        out.push(NpRelation {
            instance_id: fields[0].to_string(),
            np_a: fields[1].to_string(),
            preposition: fields[2].to_string(),
            np_b: fields[3].to_string(),
        });
    }
    Ok(out)
}

/// Share of eventive superlatives with at least one CS argument found in
/// the document but not in the superlative's sentence.
///
/// Matching is a case-folded, punctuation-stripped, whitespace-normalized
/// substring test, so the rate is a lower bound.
pub fn implicit_arg_rate(instances: &[AnnotatedInstance]) -> Rate {
    let mut rate = Rate {
        numerator: 0,
        denominator: 0,
    };
    for inst in instances {
        let Some(event) = inst.frame.as_ref().and_then(|f| f.cs.as_event()) else {
            continue;
        };
        rate.denominator += 1;
        let sentence = inst.sentence();
        if event
            .args
            .iter()
            .any(|a| key_contains(&inst.doc_text, &a.value) && !key_contains(sentence, &a.value))
        {
            rate.numerator += 1;
        }
    }
    rate
}

/// Share of implicit superlatives restricted by an NP relation: some
/// relation of the instance has the trigger inside `np_a` and a CS
/// restriction value inside `np_b`.
pub fn np_relation_overlap(instances: &[AnnotatedInstance], relations: &[NpRelation]) -> Rate {
    let mut rate = Rate {
        numerator: 0,
        denominator: 0,
    };
    for inst in instances {
        let Some(frame) = inst.frame.as_ref().filter(|f| f.implicit) else {
            continue;
        };
        rate.denominator += 1;
        let trigger = inst.trigger();
        let matched = relations.iter().filter(|r| r.instance_id == inst.id).any(|r| {
            key_contains(&r.np_a, trigger) && frame.cs.arguments().iter().any(|a| key_contains(&r.np_b, &a.value))
        });
        if matched {
            rate.numerator += 1;
        }
    }
    rate
}
