use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::AnalysisError;

/// Token log-probabilities of one completion under one condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogProbRecord {
    pub instance_id: String,
    /// E.g. `no-context`, `context-1`.
    pub condition: String,
    pub completion: String,
    pub token_logprobs: Vec<f64>,
    #[serde(default)]
    pub gold: bool,
}

/// Mean per-token log-probability of a completion.
pub fn avg_conditional_logprob(record: &LogProbRecord) -> Result<f64, AnalysisError> {
    if record.token_logprobs.is_empty() {
        return Err(AnalysisError::EmptyLogprobs(record.instance_id.clone()));
    }
    if let Some(v) = record.token_logprobs.iter().find(|v| **v > 0.0 || v.is_nan()) {
        return Err(AnalysisError::PositiveLogprob {
            instance: record.instance_id.clone(),
            value: v.to_string(),
        });
    }
    Ok(record.token_logprobs.iter().sum::<f64>() / record.token_logprobs.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    /// The gold completion scores strictly highest.
    Correct,
    Incorrect,
    /// The gold completion shares the highest score; counted as incorrect.
    Tie,
}

/// Compares the gold score against the competing completions' scores.
pub fn decide(gold: f64, others: &[f64]) -> Decision {
    let best = others.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if gold > best {
        Decision::Correct
    } else if gold == best {
        Decision::Tie
    } else {
        Decision::Incorrect
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstancePreference {
    pub instance_id: String,
    pub condition: String,
    /// `None` for groups without a gold completion.
    pub gold_mean: Option<f64>,
    pub best_other_mean: Option<f64>,
    /// Completion with the highest mean (first in input order on ties).
    pub preferred: String,
    pub decision: Option<Decision>,
    /// Absolute difference between the two highest means.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRow {
    pub condition: String,
    pub instances: usize,
    /// Instances with a gold completion.
    pub judged: usize,
    pub correct: usize,
    pub ties: usize,
    /// `correct / judged`; `None` when nothing was judged.
    pub preference_rate: Option<f64>,
    pub mean_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceReport {
    /// Sorted by condition label.
    pub conditions: Vec<ConditionRow>,
    /// Sorted by condition, then instance id.
    pub instances: Vec<InstancePreference>,
}

impl PreferenceReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionRow> {
        self.conditions.iter().find(|c| c.condition == name)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{:<16} {:>9} {:>8} {:>5} {:>9}\n",
            "condition", "instances", "pref.", "ties", "mean gap"
        );
        for c in &self.conditions {
            let rate = c.preference_rate.map_or("n/a".to_string(), |r| format!("{r:.3}"));
            let _ = writeln!(
                out,
                "{:<16} {:>9} {:>8} {:>5} {:>9.4}",
                c.condition, c.instances, rate, c.ties, c.mean_gap
            );
        }
        for i in &self.instances {
            let _ = match (i.gold_mean, i.best_other_mean, i.decision) {
                (Some(g), Some(o), Some(d)) => {
                    let flag = if d == Decision::Tie { "  [tie]" } else { "" };
                    writeln!(
                        out,
                        "{} / {}: gold {g:.4} vs {o:.4} -> {d:?} ({}){flag}",
                        i.instance_id, i.condition, i.preferred
                    )
                }
                _ => writeln!(
                    out,
                    "{} / {}: gap {:.4} ({})",
                    i.instance_id, i.condition, i.gap, i.preferred
                ),
            };
        }
        out
    }
}

/// Groups records by (condition, instance) and checks whether the gold
/// completion has the highest mean log-probability.
///
/// Every group needs two or more completions and at most one gold. Groups
/// without a gold completion (e.g. a no-context condition) only contribute
/// to the mean gap.
pub fn preference_report(records: &[LogProbRecord]) -> Result<PreferenceReport, AnalysisError> {
    let mut groups: BTreeMap<(&str, &str), Vec<&LogProbRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.condition.as_str(), r.instance_id.as_str()))
            .or_default()
            .push(r);
    }
    let mut instances = Vec::new();
    for ((condition, instance), group) in groups {
        let err = |message: &str| AnalysisError::Group {
            instance: instance.to_string(),
            condition: condition.to_string(),
            message: message.to_string(),
        };
        if group.len() < 2 {
            return Err(err("needs at least two completions"));
        }
        if group.iter().filter(|r| r.gold).count() > 1 {
            return Err(err("more than one gold completion"));
        }
        let means = group
            .iter()
            .map(|r| avg_conditional_logprob(r))
            .collect::<Result<Vec<_>, _>>()?;
        let gi = group.iter().position(|r| r.gold);
        let others: Vec<f64> = means
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != gi)
            .map(|(_, m)| *m)
            .collect();
        let mut sorted = means.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let top = means
            .iter()
            .enumerate()
            .fold(0, |best, (i, m)| if *m > means[best] { i } else { best });
        instances.push(InstancePreference {
            instance_id: instance.to_string(),
            condition: condition.to_string(),
            gold_mean: gi.map(|g| means[g]),
            best_other_mean: gi.map(|_| others.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
            preferred: group[top].completion.clone(),
            decision: gi.map(|g| decide(means[g], &others)),
            gap: (sorted[0] - sorted[1]).abs(),
        });
    }
    let mut conditions: Vec<ConditionRow> = Vec::new();
    for inst in &instances {
        if conditions.last().is_none_or(|c| c.condition != inst.condition) {
            conditions.push(ConditionRow {
                condition: inst.condition.clone(),
                instances: 0,
                judged: 0,
                correct: 0,
                ties: 0,
                preference_rate: None,
                mean_gap: 0.0,
            });
        }
        let row = conditions.last_mut().expect("pushed");
        row.instances += 1;
        row.judged += usize::from(inst.decision.is_some());
        row.correct += usize::from(inst.decision == Some(Decision::Correct));
        row.ties += usize::from(inst.decision == Some(Decision::Tie));
        row.mean_gap += inst.gap;
    }
    for row in &mut conditions {
        row.preference_rate = (row.judged > 0).then(|| row.correct as f64 / row.judged as f64);
        row.mean_gap /= row.instances as f64;
    }
    Ok(PreferenceReport { conditions, instances })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, cond: &str, completion: &str, lps: &[f64], gold: bool) -> LogProbRecord {
        LogProbRecord {
            instance_id: id.into(),
            condition: cond.into(),
            completion: completion.into(),
            token_logprobs: lps.to_vec(),
            gold,
        }
    }

    #[test]
    fn means() {
        assert_eq!(
            avg_conditional_logprob(&rec("a", "c", "x", &[-1.0, -3.0], true)),
            Ok(-2.0)
        );
        assert_eq!(avg_conditional_logprob(&rec("a", "c", "x", &[-0.5], true)), Ok(-0.5));
        assert!(avg_conditional_logprob(&rec("a", "c", "x", &[], true)).is_err());
        assert!(avg_conditional_logprob(&rec("a", "c", "x", &[0.5], true)).is_err());
    }

    #[test]
    fn preferred_and_ties() {
        let r = preference_report(&[
            rec("1", "c", "good", &[-1.5], true),
            rec("1", "c", "bad", &[-2.5], false),
            rec("2", "c", "good", &[-1.0, -2.0], true),
            rec("2", "c", "bad", &[-1.5, -1.5], false),
        ])
        .unwrap();
        let row = r.condition("c").unwrap();
        assert_eq!((row.instances, row.correct, row.ties), (2, 1, 1));
        assert_eq!(row.preference_rate, Some(0.5));
        assert_eq!(r.instances[1].decision, Some(Decision::Tie));
        assert!(r.render().contains("[tie]"));
    }

    #[test]
    fn group_errors() {
        let two = preference_report(&[rec("1", "c", "a", &[-1.0], true), rec("1", "c", "b", &[-2.0], true)]);
        assert!(matches!(two, Err(AnalysisError::Group { message, .. }) if message == "more than one gold completion"));
        assert!(preference_report(&[rec("1", "c", "a", &[-1.0], true)]).is_err());
    }

    #[test]
    fn ungraded_groups_only_count_towards_the_gap() {
        let r = preference_report(&[
            rec("1", "none", "a", &[-1.0], false),
            rec("1", "none", "b", &[-1.25], false),
        ])
        .unwrap();
        let row = r.condition("none").unwrap();
        assert_eq!((row.instances, row.judged, row.preference_rate), (1, 0, None));
        assert_eq!(row.mean_gap, 0.25);
        assert_eq!(r.instances[0].decision, None);
        assert!(r.render().contains("n/a"));
    }
}
