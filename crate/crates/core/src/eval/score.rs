use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};

use super::{exact_match, rouge1, token_iou, EvalError, MatchPolicy, RougeMode};
use crate::corpus::AnnotatedInstance;
use crate::frame::{serialize_frame, SuperlativeFrame};

/// A predicted frame slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    Target,
    Cs,
    Anchor,
    Property,
    Orientation,
    Implicit,
    /// The whole frame as one rendered string.
    Full,
}

impl Slot {
    pub const ALL: [Slot; 7] = [
        Slot::Target,
        Slot::Cs,
        Slot::Anchor,
        Slot::Property,
        Slot::Orientation,
        Slot::Implicit,
        Slot::Full,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Slot::Target => "target",
            Slot::Cs => "cs",
            Slot::Anchor => "anchor",
            Slot::Property => "property",
            Slot::Orientation => "orientation",
            Slot::Implicit => "implicit",
            Slot::Full => "full",
        }
    }

    /// Gold string of this slot.
    pub fn gold(self, frame: &SuperlativeFrame) -> String {
        match self {
            Slot::Target => serialize_frame(&frame.target),
            Slot::Cs => serialize_frame(&frame.cs),
            Slot::Anchor => frame.anchor_text(),
            Slot::Property => frame.property.clone(),
            Slot::Orientation => frame.orientation.as_str().to_string(),
            Slot::Implicit => frame.implicit.to_string(),
            Slot::Full => frame.render(),
        }
    }

    /// Exact-match policy under a configured normalization: `Frame`
    /// compares target and CS structurally and everything else as text;
    /// `Text` and `Raw` apply to every slot.
    pub fn policy(self, normalization: MatchPolicy) -> MatchPolicy {
        match (normalization, self) {
            (MatchPolicy::Frame, Slot::Target | Slot::Cs) => MatchPolicy::Frame,
            (MatchPolicy::Frame, _) => MatchPolicy::Text,
            (other, _) => other,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One line of a predictions file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictionRecord {
    pub instance_id: String,
    pub slot: Slot,
    pub prediction: String,
}

/// Parses predictions JSONL, skipping blank lines.
pub fn parse_predictions(text: &str) -> Result<Vec<PredictionRecord>, EvalError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| EvalError::Malformed {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subset {
    All,
    /// Instances whose comparison set is an event.
    Event,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub slot: Slot,
    pub subset: Subset,
    /// Gold instances scored.
    pub support: usize,
    /// Gold instances without a prediction (scored 0).
    pub missing: usize,
    pub em: f64,
    pub iou: f64,
    pub rouge1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub rows: Vec<ScoreRow>,
}

impl ScoreReport {
    pub fn row(&self, slot: Slot, subset: Subset) -> Option<&ScoreRow> {
        self.rows.iter().find(|r| r.slot == slot && r.subset == subset)
    }

    /// Percent table in the EM / IOU / R layout.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{:<12} {:>6} {:>6} {:>6} {:>8} {:>8}\n",
            "slot", "EM", "IOU", "R", "support", "missing"
        );
        for r in &self.rows {
            let name = match r.subset {
                Subset::All => r.slot.name().to_string(),
                Subset::Event => "  event".to_string(),
            };
            let _ = writeln!(
                out,
                "{:<12} {:>6.1} {:>6.1} {:>6.1} {:>8} {:>8}",
                name,
                100.0 * r.em,
                100.0 * r.iou,
                100.0 * r.rouge1,
                r.support,
                r.missing
            );
        }
        out
    }
}

/// Per-slot EM, token IOU and ROUGE-1 F1 of `predictions` against the
/// superlative instances of `gold`.
///
/// A slot is reported when at least one prediction targets it; every gold
/// superlative then counts, and missing predictions score 0. Target and CS
/// also get a row over the eventive subset. Instances are visited in id
/// order, so the result does not depend on prediction order.
pub fn score_predictions(
    gold: &[AnnotatedInstance],
    predictions: &[PredictionRecord],
) -> Result<ScoreReport, EvalError> {
    score_predictions_with(gold, predictions, MatchPolicy::Frame)
}

/// [`score_predictions`] with an explicit normalization (see [`Slot::policy`]).
pub fn score_predictions_with(
    gold: &[AnnotatedInstance],
    predictions: &[PredictionRecord],
    normalization: MatchPolicy,
) -> Result<ScoreReport, EvalError> {
    let by_id: HashMap<&str, &AnnotatedInstance> = gold.iter().map(|i| (i.id.as_str(), i)).collect();
    let mut preds: HashMap<(&str, Slot), &str> = HashMap::new();
    let mut slots = BTreeSet::new();
    for p in predictions {
        let inst = by_id
            .get(p.instance_id.as_str())
            .ok_or_else(|| EvalError::UnknownInstance(p.instance_id.clone()))?;
        if inst.frame.is_none() {
            return Err(EvalError::NonSuperlative(p.instance_id.clone()));
        }
        if preds
            .insert((p.instance_id.as_str(), p.slot), p.prediction.as_str())
            .is_some()
        {
            return Err(EvalError::Duplicate(p.instance_id.clone(), p.slot.to_string()));
        }
        slots.insert(p.slot);
    }
    let ordered: BTreeMap<&str, &SuperlativeFrame> = gold
        .iter()
        .filter_map(|i| Some((i.id.as_str(), i.frame.as_ref()?)))
        .collect();

    let mut rows = Vec::new();
    for slot in slots {
        let subsets: &[Subset] = match slot {
            Slot::Target | Slot::Cs => &[Subset::All, Subset::Event],
            _ => &[Subset::All],
        };
        for &subset in subsets {
            let mut row = ScoreRow {
                slot,
                subset,
                support: 0,
                missing: 0,
                em: 0.0,
                iou: 0.0,
                rouge1: 0.0,
            };
            for (id, frame) in &ordered {
                if subset == Subset::Event && !frame.cs.is_eventive() {
                    continue;
                }
                row.support += 1;
                let Some(pred) = preds.get(&(*id, slot)) else {
                    row.missing += 1;
                    continue;
                };
                let g = slot.gold(frame);
                row.em += exact_match(&g, pred, slot.policy(normalization));
                row.iou += token_iou(&g, pred);
                row.rouge1 += rouge1(&g, pred, RougeMode::F1);
            }
            if row.support > 0 {
                let n = row.support as f64;
                row.em /= n;
                row.iou /= n;
                row.rouge1 /= n;
            }
            rows.push(row);
        }
    }
    Ok(ScoreReport { rows })
}
