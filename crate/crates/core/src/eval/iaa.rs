use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{cohens_kappa, exact_match, mean, role_arg_matches, EvalError, MatchPolicy};
use crate::corpus::AnnotatedInstance;
use crate::frame::{serialize_frame, SuperlativeFrame};

/// Row names of the agreement table, in order.
pub const IAA_ROWS: [&str; 10] = [
    "event vs. none",
    "exact target",
    "exact CS",
    "exact anchor",
    "exact property",
    "exact orientation",
    "exact implicit",
    "event predicate",
    "CS (no event)",
    "role arg. iou>=0.5",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IaaRow {
    pub name: String,
    /// `None` when no item qualifies for the row.
    pub accuracy: Option<f64>,
    /// Reported for the categorical rows only.
    pub kappa: Option<f64>,
    /// Items (or, for the role row, reference arguments) behind the value.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IaaReport {
    /// Instances shared by both sets.
    pub items: usize,
    /// Instances where both sides carry a frame; every row is computed over
    /// these or a subset of them.
    pub compared: usize,
    pub rows: Vec<IaaRow>,
}

impl IaaReport {
    pub fn row(&self, name: &str) -> Option<&IaaRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Aligned text table: accuracy with kappa in brackets.
    pub fn render(&self) -> String {
        let mut out = format!("{:<20} {:>14} {:>8}\n", "", "agreement", "support");
        for r in &self.rows {
            let value = match (r.accuracy, r.kappa) {
                (Some(a), Some(k)) => format!("{a:.2} ({k:.2})"),
                (Some(a), None) => format!("{a:.2}"),
                (None, _) => "n/a".to_string(),
            };
            let _ = writeln!(out, "{:<20} {:>14} {:>8}", r.name, value, r.support);
        }
        let _ = writeln!(out, "items: {}  compared: {}", self.items, self.compared);
        out
    }
}

fn row(name: &str, hits: &[f64], kappa: Option<f64>) -> IaaRow {
    IaaRow {
        name: name.to_string(),
        accuracy: mean(hits),
        kappa,
        support: hits.len(),
    }
}

fn kappa_of<T: Eq + std::hash::Hash>(a: &[T], b: &[T]) -> Option<f64> {
    cohens_kappa(a, b).ok()
}

/// Agreement between two annotation sets over the same instance ids.
///
/// Items where either side has no frame are counted in `items` but not
/// compared. `event predicate` and `role arg. iou>=0.5` use the items where
/// both sides chose an event, with side `a` as the reference for argument
/// recovery; `CS (no event)` uses the items where neither did.
pub fn iaa_report(a: &[AnnotatedInstance], b: &[AnnotatedInstance]) -> Result<IaaReport, EvalError> {
    let ma: BTreeMap<&str, &AnnotatedInstance> = a.iter().map(|i| (i.id.as_str(), i)).collect();
    let mb: BTreeMap<&str, &AnnotatedInstance> = b.iter().map(|i| (i.id.as_str(), i)).collect();
    if let Some(id) = ma
        .keys()
        .find(|k| !mb.contains_key(*k))
        .or_else(|| mb.keys().find(|k| !ma.contains_key(*k)))
    {
        return Err(EvalError::IdMismatch(id.to_string()));
    }
    let pairs: Vec<(&SuperlativeFrame, &SuperlativeFrame)> = ma
        .iter()
        .filter_map(|(id, x)| Some((x.frame.as_ref()?, mb[id].frame.as_ref()?)))
        .collect();

    let text = MatchPolicy::Text;
    let frame = MatchPolicy::Frame;
    let ev_a: Vec<bool> = pairs.iter().map(|(x, _)| x.cs.is_eventive()).collect();
    let ev_b: Vec<bool> = pairs.iter().map(|(_, y)| y.cs.is_eventive()).collect();
    let or_a: Vec<_> = pairs.iter().map(|(x, _)| x.orientation).collect();
    let or_b: Vec<_> = pairs.iter().map(|(_, y)| y.orientation).collect();
    let im_a: Vec<bool> = pairs.iter().map(|(x, _)| x.implicit).collect();
    let im_b: Vec<bool> = pairs.iter().map(|(_, y)| y.implicit).collect();
    let eq = |x: bool| if x { 1.0 } else { 0.0 };

    let event_hits: Vec<f64> = ev_a.iter().zip(&ev_b).map(|(x, y)| eq(x == y)).collect();
    let target: Vec<f64> = pairs
        .iter()
        .map(|(x, y)| exact_match(&serialize_frame(&x.target), &serialize_frame(&y.target), frame))
        .collect();
    let cs: Vec<f64> = pairs
        .iter()
        .map(|(x, y)| exact_match(&serialize_frame(&x.cs), &serialize_frame(&y.cs), frame))
        .collect();
    let anchor: Vec<f64> = pairs
        .iter()
        .map(|(x, y)| exact_match(&x.anchor_text(), &y.anchor_text(), text))
        .collect();
    let property: Vec<f64> = pairs
        .iter()
        .map(|(x, y)| exact_match(&x.property, &y.property, text))
        .collect();
    let orientation: Vec<f64> = or_a.iter().zip(&or_b).map(|(x, y)| eq(x == y)).collect();
    let implicit: Vec<f64> = im_a.iter().zip(&im_b).map(|(x, y)| eq(x == y)).collect();

    let both_events: Vec<_> = pairs
        .iter()
        .filter_map(|(x, y)| Some((x.cs.as_event()?, y.cs.as_event()?)))
        .collect();
    let predicate: Vec<f64> = both_events
        .iter()
        .map(|(x, y)| eq(x.predicate == y.predicate))
        .collect();
    let no_event: Vec<f64> = pairs
        .iter()
        .filter(|(x, y)| !x.cs.is_eventive() && !y.cs.is_eventive())
        .map(|(x, y)| exact_match(&serialize_frame(&x.cs), &serialize_frame(&y.cs), text))
        .collect();
    let (mut correct, mut total) = (0, 0);
    for (x, y) in &both_events {
        let (c, n) = role_arg_matches(&x.args, &y.args, 0.5);
        correct += c;
        total += n;
    }
    let role_row = IaaRow {
        name: IAA_ROWS[9].to_string(),
        accuracy: (total > 0).then(|| correct as f64 / total as f64),
        kappa: None,
        support: total,
    };

    Ok(IaaReport {
        items: ma.len(),
        compared: pairs.len(),
        rows: vec![
            row(IAA_ROWS[0], &event_hits, kappa_of(&ev_a, &ev_b)),
            row(IAA_ROWS[1], &target, None),
            row(IAA_ROWS[2], &cs, None),
            row(IAA_ROWS[3], &anchor, None),
            row(IAA_ROWS[4], &property, None),
            row(IAA_ROWS[5], &orientation, kappa_of(&or_a, &or_b)),
            row(IAA_ROWS[6], &implicit, kappa_of(&im_a, &im_b)),
            row(IAA_ROWS[7], &predicate, None),
            row(IAA_ROWS[8], &no_event, None),
            role_row,
        ],
    })
}
