//! Span and label agreement metrics.
//!
//! Tokenization for every overlap metric is [`crate::text::tokens`]:
//! punctuation becomes whitespace, text is lowercased and split on
//! whitespace.

mod iaa;
mod score;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use iaa::{iaa_report, IaaReport, IaaRow, IAA_ROWS};
pub use score::{
    parse_predictions, score_predictions, score_predictions_with, PredictionRecord, ScoreReport, ScoreRow, Slot, Subset,
};

use crate::frame::{parse_frame_notation, Argument, SetExpr};
use crate::text::{normalize_answer, tokens};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("label lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no labels to compare")]
    Empty,
    #[error("instance ids differ between annotation sets: {0}")]
    IdMismatch(String),
    #[error("prediction references unknown instance {0:?}")]
    UnknownInstance(String),
    #[error("prediction references non-superlative instance {0:?}")]
    NonSuperlative(String),
    #[error("duplicate prediction for instance {0:?}, slot {1}")]
    Duplicate(String, String),
    #[error("malformed prediction at line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// How strings are compared by [`exact_match`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchPolicy {
    /// Byte equality.
    Raw,
    /// Case-fold, collapse whitespace, strip leading/trailing punctuation.
    #[default]
    Text,
    /// Frame notation: both sides are parsed and compared structurally, with
    /// arguments as an unordered multiset of `(role, normalized value)`.
    /// Falls back to `Text` when either side does not parse.
    Frame,
}

impl std::str::FromStr for MatchPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(MatchPolicy::Raw),
            "text" => Ok(MatchPolicy::Text),
            "frame" => Ok(MatchPolicy::Frame),
            _ => Err(format!("unknown normalization policy {s:?} (raw, text, frame)")),
        }
    }
}

/// Canonical key of a set expression for structural comparison.
fn structure_key(expr: &SetExpr) -> (bool, String, Vec<(String, String)>) {
    let (eventive, head) = match expr {
        SetExpr::Eventive(e) => (true, e.predicate.clone()),
        SetExpr::Nominal(n) => (false, normalize_answer(&n.head)),
    };
    let mut args: Vec<_> = expr
        .arguments()
        .iter()
        .map(|a| (a.role.as_str().to_string(), normalize_answer(&a.value)))
        .collect();
    args.sort();
    (eventive, head, args)
}

/// 1.0 when `gold` and `pred` are equal under `policy`, else 0.0.
pub fn exact_match(gold: &str, pred: &str, policy: MatchPolicy) -> f64 {
    let equal = match policy {
        MatchPolicy::Raw => gold == pred,
        MatchPolicy::Text => normalize_answer(gold) == normalize_answer(pred),
        MatchPolicy::Frame => match (parse_frame_notation(gold), parse_frame_notation(pred)) {
            (Ok(g), Ok(p)) => structure_key(&g) == structure_key(&p),
            _ => normalize_answer(gold) == normalize_answer(pred),
        },
    };
    if equal {
        1.0
    } else {
        0.0
    }
}

/// Intersection over union of the token sets; 1.0 when both are empty.
pub fn token_iou(gold: &str, pred: &str) -> f64 {
    let g: HashSet<String> = tokens(gold).into_iter().collect();
    let p: HashSet<String> = tokens(pred).into_iter().collect();
    if g.is_empty() && p.is_empty() {
        return 1.0;
    }
    let inter = g.intersection(&p).count();
    let union = g.len() + p.len() - inter;
    inter as f64 / union as f64
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RougeMode {
    #[default]
    F1,
    Recall,
}

/// Unigram overlap with clipped counts. 1.0 when both sides are empty, 0.0
/// when exactly one is.
pub fn rouge1(gold: &str, pred: &str, mode: RougeMode) -> f64 {
    let g = tokens(gold);
    let p = tokens(pred);
    if g.is_empty() && p.is_empty() {
        return 1.0;
    }
    if g.is_empty() || p.is_empty() {
        return 0.0;
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in &g {
        *counts.entry(t).or_default() += 1;
    }
    let mut overlap = 0usize;
    for t in &p {
        if let Some(c) = counts.get_mut(t.as_str()).filter(|c| **c > 0) {
            *c -= 1;
            overlap += 1;
        }
    }
    let recall = overlap as f64 / g.len() as f64;
    match mode {
        RougeMode::Recall => recall,
        RougeMode::F1 => {
            if overlap == 0 {
                return 0.0;
            }
            let precision = overlap as f64 / p.len() as f64;
            2.0 * precision * recall / (precision + recall)
        }
    }
}

/// Number of gold arguments matched by a same-role predicted argument with
/// token IOU ≥ `threshold`, and the number of gold arguments.
///
/// Within each role, pairs are taken greedily by descending IOU (ties by
/// gold then predicted position); each argument is used at most once.
pub fn role_arg_matches(gold: &[Argument], pred: &[Argument], threshold: f64) -> (usize, usize) {
    let mut by_role: BTreeMap<&str, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, a) in gold.iter().enumerate() {
        by_role.entry(a.role.as_str()).or_default().0.push(i);
    }
    for (j, a) in pred.iter().enumerate() {
        if let Some(entry) = by_role.get_mut(a.role.as_str()) {
            entry.1.push(j);
        }
    }
    let mut correct = 0;
    for (gs, ps) in by_role.values() {
        let mut pairs: Vec<(f64, usize, usize)> = gs
            .iter()
            .flat_map(|&i| {
                ps.iter()
                    .map(move |&j| (token_iou(&gold[i].value, &pred[j].value), i, j))
            })
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut used_g = HashSet::new();
        let mut used_p = HashSet::new();
        for (iou, i, j) in pairs {
            if used_g.contains(&i) || used_p.contains(&j) {
                continue;
            }
            used_g.insert(i);
            used_p.insert(j);
            if iou >= threshold {
                correct += 1;
            }
        }
    }
    (correct, gold.len())
}

/// Fraction of gold arguments recovered (see [`role_arg_matches`]); 1.0
/// when gold has no arguments.
pub fn role_arg_iou_accuracy(gold: &[Argument], pred: &[Argument], threshold: f64) -> f64 {
    match role_arg_matches(gold, pred, threshold) {
        (_, 0) => 1.0,
        (c, n) => c as f64 / n as f64,
    }
}

/// Cohen's kappa of two labelings. Returns 1.0 when chance agreement is 1.
pub fn cohens_kappa<T: Eq + Hash>(a: &[T], b: &[T]) -> Result<f64, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(EvalError::Empty);
    }
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64;
    let mut ma: HashMap<&T, usize> = HashMap::new();
    let mut mb: HashMap<&T, usize> = HashMap::new();
    for (x, y) in a.iter().zip(b) {
        *ma.entry(x).or_default() += 1;
        *mb.entry(y).or_default() += 1;
    }
    let p_o = agree / n;
    let p_e: f64 = ma
        .iter()
        .map(|(k, ca)| *ca as f64 * mb.get(k).copied().unwrap_or(0) as f64)
        .sum::<f64>()
        / (n * n);
    if 1.0 - p_e <= f64::EPSILON {
        return Ok(1.0);
    }
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Mean of `values`, `None` when empty.
pub(crate) fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Role;

    fn args(pairs: &[(&str, &str)]) -> Vec<Argument> {
        pairs
            .iter()
            .map(|(r, v)| Argument::new(Role::new(r).unwrap(), *v))
            .collect()
    }

    #[test]
    fn exact_match_policies() {
        assert_eq!(exact_match("popularity", "popularity", MatchPolicy::Text), 1.0);
        assert_eq!(exact_match("popularity", "Popularity ", MatchPolicy::Text), 1.0);
        assert_eq!(exact_match("popularity", "Popularity ", MatchPolicy::Raw), 0.0);
        assert_eq!(
            exact_match(
                "PAY(e, AGENT=people, ASSET=Visa cards)",
                "PAY(e, ASSET=Visa cards, AGENT=people)",
                MatchPolicy::Frame
            ),
            1.0
        );
        assert_eq!(
            exact_match("PAY(e, AGENT=people)", "PAY(e, AGENT=the people)", MatchPolicy::Frame),
            0.0
        );
        assert_eq!(exact_match("birds", "Birds.", MatchPolicy::Frame), 1.0);
    }

    #[test]
    fn iou() {
        assert_eq!(token_iou("the largest fish", "the largest fish"), 1.0);
        assert!((token_iou("the largest fish", "largest fish") - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(token_iou("a b", "c d"), 0.0);
        assert_eq!(token_iou("", "..."), 1.0);
    }

    #[test]
    fn rouge() {
        assert_eq!(rouge1("x y", "x y", RougeMode::F1), 1.0);
        // 2 clipped matches, P = 2/2, R = 2/6.
        let f = rouge1("the largest fish in the lake", "largest fish", RougeMode::F1);
        assert!((f - 0.5).abs() < 1e-15);
        assert!((rouge1("the largest fish in the lake", "largest fish", RougeMode::Recall) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(rouge1("a b", "", RougeMode::F1), 0.0);
        // Clipping: "the the the" against one "the".
        assert!((rouge1("the cat", "the the the", RougeMode::F1) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn role_args() {
        let g = args(&[("AGENT", "psychologists")]);
        assert_eq!(role_arg_iou_accuracy(&g, &g, 0.5), 1.0);
        assert_eq!(
            role_arg_iou_accuracy(&g, &args(&[("AGENT", "the psychologists")]), 0.5),
            1.0
        );
        assert_eq!(
            role_arg_iou_accuracy(&g, &args(&[("THEME", "psychologists")]), 0.5),
            0.0
        );
        let g = args(&[("AGENT", "Tom"), ("AGENT", "Mary Jane")]);
        let p = args(&[("AGENT", "Mary Jane"), ("AGENT", "Tom")]);
        assert_eq!(role_arg_iou_accuracy(&g, &p, 0.5), 1.0);
    }

    #[test]
    fn kappa() {
        assert_eq!(cohens_kappa(&["x", "y", "x"], &["x", "y", "x"]), Ok(1.0));
        assert_eq!(cohens_kappa(&["x", "x", "y", "y"], &["y", "y", "x", "x"]), Ok(-1.0));
        assert_eq!(cohens_kappa(&["x", "x", "y", "y"], &["x", "y", "x", "y"]), Ok(0.0));
        assert_eq!(cohens_kappa(&[true, true], &[true, true]), Ok(1.0));
        assert_eq!(cohens_kappa::<u8>(&[], &[]), Err(EvalError::Empty));
        assert_eq!(cohens_kappa(&[1], &[1, 2]), Err(EvalError::LengthMismatch(1, 2)));
    }
}
