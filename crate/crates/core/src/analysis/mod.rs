//! Ambiguity analyses over externally produced model outputs: comparison
//! type entropy of beams, conditional log-probability preferences and the
//! absolute/relative challenge report.

mod challenge;
mod logprob;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use challenge::{challenge_report, ChallengeContext, ChallengeItem, ChallengeReport, ChallengeRow, Reading};
pub use logprob::{
    avg_conditional_logprob, decide, preference_report, ConditionRow, Decision, InstancePreference, LogProbRecord,
    PreferenceReport,
};

use crate::frame::{classify_set_expr, parse_frame_notation, LightVerbs, SemanticType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("beam for {0:?} has no hypotheses")]
    EmptyBeam(String),
    #[error("no token log-probabilities for {0:?}")]
    EmptyLogprobs(String),
    #[error("token log-probability {value} for {instance:?} is positive")]
    PositiveLogprob { instance: String, value: String },
    #[error("{instance:?} / {condition:?}: {message}")]
    Group {
        instance: String,
        condition: String,
        message: String,
    },
    #[error("beam/item mismatch: {0}")]
    BeamMismatch(String),
    #[error("malformed record at line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// Comparison type of a CS string produced by a model.
///
/// Parseable strings are classified structurally. Anything else is a
/// relative nominal comparison when it contains a `ROLE=` pattern and a
/// property comparison otherwise.
pub fn classify_cs_string(cs: &str, light_verbs: &LightVerbs) -> SemanticType {
    match parse_frame_notation(cs) {
        Ok(expr) => classify_set_expr(&expr, light_verbs),
        Err(_) if has_role_pattern(cs) => SemanticType::RelativeSCNominal,
        Err(_) => SemanticType::PropertySC,
    }
}

/// An uppercase token (letters, digits, underscores, starting with a letter)
/// directly followed by `=`.
fn has_role_pattern(s: &str) -> bool {
    let chars: Vec<char> = s.chars().collect();
    chars.iter().enumerate().any(|(i, &c)| {
        if c != '=' {
            return false;
        }
        let mut j = i;
        while j > 0 && (chars[j - 1].is_ascii_uppercase() || chars[j - 1].is_ascii_digit() || chars[j - 1] == '_') {
            j -= 1;
        }
        j < i && chars[j].is_ascii_uppercase() && (j == 0 || !chars[j - 1].is_alphanumeric())
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntropyBase {
    #[default]
    Nats,
    Bits,
}

impl std::str::FromStr for EntropyBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nats" | "e" | "ln" => Ok(EntropyBase::Nats),
            "bits" | "2" => Ok(EntropyBase::Bits),
            _ => Err(format!("unknown entropy base {s:?} (nats, bits)")),
        }
    }
}

/// Shannon entropy of a count distribution, with `0 log 0 = 0`. Zero for an
/// empty distribution.
pub fn count_entropy(counts: &[usize], base: EntropyBase) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let nats = -counts
        .iter()
        .filter(|c| **c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            p * p.ln()
        })
        .sum::<f64>();
    let h = match base {
        EntropyBase::Nats => nats,
        EntropyBase::Bits => nats / std::f64::consts::LN_2,
    };
    h.max(0.0)
}

/// Entropy over the four comparison types of a list of type labels.
pub fn type_entropy(types: &[SemanticType], base: EntropyBase) -> f64 {
    let counts = SemanticType::ALL.map(|t| types.iter().filter(|x| **x == t).count());
    count_entropy(&counts, base)
}

/// Ranked CS hypotheses for one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeamPrediction {
    pub instance_id: String,
    pub hypotheses: Vec<String>,
}

/// Entropy of the comparison types of a beam's hypotheses.
pub fn beam_entropy(beam: &BeamPrediction, light_verbs: &LightVerbs, base: EntropyBase) -> Result<f64, AnalysisError> {
    if beam.hypotheses.is_empty() {
        return Err(AnalysisError::EmptyBeam(beam.instance_id.clone()));
    }
    let types: Vec<_> = beam
        .hypotheses
        .iter()
        .map(|h| classify_cs_string(h, light_verbs))
        .collect();
    Ok(type_entropy(&types, base))
}

/// Per-beam entropies in input order with their mean and type totals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub base: EntropyBase,
    pub beams: Vec<(String, f64)>,
    pub mean: Option<f64>,
    /// Hypothesis counts per comparison type over all beams.
    pub type_counts: Vec<(SemanticType, usize)>,
}

impl EntropyReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (id, h) in &self.beams {
            out.push_str(&format!("{id:<24} {h:.4}\n"));
        }
        for (t, c) in &self.type_counts {
            out.push_str(&format!("{:<24} {c}\n", t.label()));
        }
        let unit = match self.base {
            EntropyBase::Nats => "nats",
            EntropyBase::Bits => "bits",
        };
        match self.mean {
            Some(m) => out.push_str(&format!("mean entropy: {m:.4} {unit}\n")),
            None => out.push_str("mean entropy: n/a\n"),
        }
        out
    }
}

pub fn entropy_report(
    beams: &[BeamPrediction],
    light_verbs: &LightVerbs,
    base: EntropyBase,
) -> Result<EntropyReport, AnalysisError> {
    let mut rows = Vec::with_capacity(beams.len());
    let mut counts: HashMap<SemanticType, usize> = HashMap::new();
    for beam in beams {
        rows.push((beam.instance_id.clone(), beam_entropy(beam, light_verbs, base)?));
        for h in &beam.hypotheses {
            *counts.entry(classify_cs_string(h, light_verbs)).or_default() += 1;
        }
    }
    let mean = (!rows.is_empty()).then(|| rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64);
    Ok(EntropyReport {
        base,
        beams: rows,
        mean,
        type_counts: SemanticType::ALL
            .map(|t| (t, counts.get(&t).copied().unwrap_or(0)))
            .to_vec(),
    })
}

/// Parses JSONL records of any deserializable type, skipping blank lines.
pub fn parse_jsonl<T: serde::de::DeserializeOwned>(text: &str) -> Result<Vec<T>, AnalysisError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| AnalysisError::Malformed {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
