use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{classify_cs_string, AnalysisError, BeamPrediction};
use crate::eval::{exact_match, MatchPolicy};
use crate::frame::LightVerbs;

/// Whether a context supports an unrestricted or a restricted reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChallengeContext {
    pub context: String,
    pub reading: Reading,
    pub gold_cs: String,
}

/// An ambiguous sentence with context variants that favour one reading.
///
/// The beam for the `k`-th variant (1-based) has instance id `"{id}/{k}"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChallengeItem {
    pub id: String,
    pub sentence: String,
    pub contexts: Vec<ChallengeContext>,
}

impl ChallengeItem {
    pub fn beam_id(&self, k: usize) -> String {
        format!("{}/{}", self.id, k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChallengeRow {
    /// `absolute`, `relative` or `overall`.
    pub reading: String,
    pub variants: usize,
    pub top_1: f64,
    pub top_k: f64,
    /// The rank-1 prediction has the gold reading's type.
    pub comp_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChallengeReport {
    pub k: usize,
    pub rows: Vec<ChallengeRow>,
}

impl ChallengeReport {
    pub fn row(&self, reading: &str) -> Option<&ChallengeRow> {
        self.rows.iter().find(|r| r.reading == reading)
    }

    pub fn render(&self) -> String {
        let top_k = format!("top_{}", self.k);
        let mut out = format!(
            "{:<10} {:>8} {:>6} {:>6} {:>14}\n",
            "reading", "variants", "top_1", top_k, "comp/abs match"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<10} {:>8} {:>6.2} {:>6.2} {:>14.2}",
                r.reading, r.variants, r.top_1, r.top_k, r.comp_abs
            );
        }
        out
    }
}

/// Scores one beam per context variant.
///
/// A hypothesis is correct when it exact-matches the gold CS structurally.
/// `top_k` considers the first `k` hypotheses. A prediction is absolute
/// when it classifies as a property comparison and relative otherwise.
pub fn challenge_report(
    items: &[ChallengeItem],
    beams: &[BeamPrediction],
    light_verbs: &LightVerbs,
    k: usize,
) -> Result<ChallengeReport, AnalysisError> {
    let mut by_id: HashMap<&str, &BeamPrediction> = HashMap::new();
    for b in beams {
        if by_id.insert(b.instance_id.as_str(), b).is_some() {
            return Err(AnalysisError::BeamMismatch(format!(
                "duplicate beam {:?}",
                b.instance_id
            )));
        }
    }
    let mut used = 0;
    let mut tallies: BTreeMap<Reading, [usize; 4]> = BTreeMap::new();
    for item in items {
        if item.contexts.is_empty() {
            return Err(AnalysisError::BeamMismatch(format!(
                "item {:?} has no context variants",
                item.id
            )));
        }
        for (i, ctx) in item.contexts.iter().enumerate() {
            let id = item.beam_id(i + 1);
            let beam = by_id
                .get(id.as_str())
                .ok_or_else(|| AnalysisError::BeamMismatch(format!("no beam for {id:?}")))?;
            let first = beam
                .hypotheses
                .first()
                .ok_or_else(|| AnalysisError::EmptyBeam(id.clone()))?;
            used += 1;
            let hit = |h: &String| exact_match(&ctx.gold_cs, h, MatchPolicy::Frame) == 1.0;
            let predicted_absolute = classify_cs_string(first, light_verbs).is_absolute();
            let t = tallies.entry(ctx.reading).or_default();
            t[0] += 1;
            t[1] += usize::from(hit(first));
            t[2] += usize::from(beam.hypotheses.iter().take(k).any(hit));
            t[3] += usize::from(predicted_absolute == (ctx.reading == Reading::Absolute));
        }
    }
    if used != by_id.len() {
        let known: std::collections::HashSet<String> = items
            .iter()
            .flat_map(|it| (1..=it.contexts.len()).map(|k| it.beam_id(k)))
            .collect();
        let mut extra: Vec<&str> = by_id.keys().copied().filter(|id| !known.contains(*id)).collect();
        extra.sort_unstable();
        return Err(AnalysisError::BeamMismatch(format!(
            "beams without an item: {}",
            extra.join(", ")
        )));
    }
    let row = |name: &str, t: [usize; 4]| {
        let n = t[0].max(1) as f64;
        ChallengeRow {
            reading: name.to_string(),
            variants: t[0],
            top_1: t[1] as f64 / n,
            top_k: t[2] as f64 / n,
            comp_abs: t[3] as f64 / n,
        }
    };
    let mut rows = Vec::new();
    let mut overall = [0usize; 4];
    for (reading, t) in &tallies {
        let name = match reading {
            Reading::Absolute => "absolute",
            Reading::Relative => "relative",
        };
        rows.push(row(name, *t));
        for (o, v) in overall.iter_mut().zip(t) {
            *o += v;
        }
    }
    rows.push(row("overall", overall));
    Ok(ChallengeReport { k, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item() -> ChallengeItem {
        ChallengeItem {
            id: "plant".into(),
            sentence: "John put the tallest plant on the table.".into(),
            contexts: vec![
                ChallengeContext {
                    context: "".into(),
                    reading: Reading::Absolute,
                    gold_cs: "plants".into(),
                },
                ChallengeContext {
                    context: "Tom, John and Mary all brought plants which they put on the table.".into(),
                    reading: Reading::Relative,
                    gold_cs: "PUT(e, AGENT=Tom & John & Mary, PATIENT=plants, DESTINATION=table)".into(),
                },
            ],
        }
    }

    fn beam(id: &str, hyps: &[&str]) -> BeamPrediction {
        BeamPrediction {
            instance_id: id.into(),
            hypotheses: hyps.iter().map(|h| h.to_string()).collect(),
        }
    }

    #[test]
    fn gold_at_rank_three() {
        let beams = [
            beam("plant/1", &["plants"]),
            beam(
                "plant/2",
                &[
                    "plants",
                    "PUT(e, AGENT=John)",
                    "PUT(e, PATIENT=plants, AGENT=Tom & John & Mary, DESTINATION=table)",
                ],
            ),
        ];
        let r = challenge_report(&[item()], &beams, &LightVerbs::default(), 5).unwrap();
        let rel = r.row("relative").unwrap();
        assert_eq!((rel.top_1, rel.top_k, rel.comp_abs), (0.0, 1.0, 0.0));
        let abs = r.row("absolute").unwrap();
        assert_eq!((abs.top_1, abs.top_k, abs.comp_abs), (1.0, 1.0, 1.0));
        assert_eq!(r.row("overall").unwrap().variants, 2);
    }

    #[test]
    fn mismatches() {
        let lv = LightVerbs::default();
        assert!(challenge_report(&[item()], &[beam("plant/1", &["plants"])], &lv, 5).is_err());
        let beams = [
            beam("plant/1", &["x"]),
            beam("plant/2", &["x"]),
            beam("plant/3", &["x"]),
        ];
        assert!(matches!(
            challenge_report(&[item()], &beams, &lv, 5),
            Err(AnalysisError::BeamMismatch(m)) if m.contains("plant/3")
        ));
    }
}
