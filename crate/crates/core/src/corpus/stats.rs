use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{AnnotatedInstance, Domain};
use crate::frame::{classify_semantic_type, LightVerbs, SemanticType};

/// One row of the per-domain count table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainRow {
    pub superlatives: usize,
    pub non_superlatives: usize,
    /// Superlatives whose comparison set is an event.
    pub events: usize,
    /// Superlatives marked implicit.
    pub implicit: usize,
}

impl DomainRow {
    pub fn new(superlatives: usize, non_superlatives: usize, events: usize, implicit: usize) -> Self {
        DomainRow {
            superlatives,
            non_superlatives,
            events,
            implicit,
        }
    }

    fn add(&mut self, other: &DomainRow) {
        self.superlatives += other.superlatives;
        self.non_superlatives += other.non_superlatives;
        self.events += other.events;
        self.implicit += other.implicit;
    }
}

/// Counts and distributions over a corpus. Every domain appears in
/// `domains`, with zero rows for domains absent from the data.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub domains: BTreeMap<Domain, DomainRow>,
    pub total: DomainRow,
    /// Semantic types of the superlatives, per domain.
    pub semantic_types: BTreeMap<Domain, BTreeMap<SemanticType, usize>>,
    /// Role labels over target and CS arguments.
    pub roles: BTreeMap<String, usize>,
    /// Lowercased properties of the superlatives.
    pub properties: BTreeMap<String, usize>,
    /// Predicate lemmas of eventive comparison sets.
    pub predicates: BTreeMap<String, usize>,
}

/// Percentage rounded to one decimal, `None` for an empty denominator.
pub fn percent(numerator: usize, denominator: usize) -> Option<f64> {
    (denominator > 0).then(|| (1000.0 * numerator as f64 / denominator as f64).round() / 10.0)
}

impl CorpusStats {
    /// Stats holding only the given per-domain rows; the total is their sum.
    pub fn from_rows(rows: impl IntoIterator<Item = (Domain, DomainRow)>) -> Self {
        let mut stats = CorpusStats::empty();
        for (domain, row) in rows {
            stats.domains.insert(domain, row);
        }
        stats.total = DomainRow::default();
        for row in stats.domains.values() {
            stats.total.add(row);
        }
        stats
    }

    fn empty() -> Self {
        CorpusStats {
            domains: Domain::ALL.iter().map(|d| (*d, DomainRow::default())).collect(),
            semantic_types: Domain::ALL
                .iter()
                .map(|d| (*d, SemanticType::ALL.iter().map(|t| (*t, 0)).collect()))
                .collect(),
            ..Default::default()
        }
    }

    /// Share of superlatives marked implicit, in percent.
    pub fn implicit_percent(&self) -> Option<f64> {
        percent(self.total.implicit, self.total.superlatives)
    }

    /// Share of superlatives restricted by an event, in percent.
    pub fn event_percent(&self) -> Option<f64> {
        percent(self.total.events, self.total.superlatives)
    }

    /// Per-domain counts with a total row.
    pub fn table1(&self) -> String {
        let mut out = format!(
            "{:<12} {:>6} {:>6} {:>6} {:>8}\n",
            "Domain", "Sup.", "¬Sup.", "Events", "Implicit"
        );
        let row = |out: &mut String, name: &str, r: &DomainRow| {
            let _ = writeln!(
                out,
                "{:<12} {:>6} {:>6} {:>6} {:>8}",
                name, r.superlatives, r.non_superlatives, r.events, r.implicit
            );
        };
        for (domain, r) in &self.domains {
            row(&mut out, domain.name(), r);
        }
        row(&mut out, "total", &self.total);
        let fmt = |p: Option<f64>| p.map_or_else(|| "n/a".to_string(), |p| format!("{p:.1}%"));
        let _ = writeln!(out, "implicit ratio: {}", fmt(self.implicit_percent()));
        let _ = writeln!(out, "event ratio: {}", fmt(self.event_percent()));
        out
    }

    /// Semantic type counts per domain.
    pub fn fig2(&self) -> String {
        let mut out = format!("{:<12}", "Domain");
        for t in SemanticType::ALL {
            let _ = write!(out, " {:>17}", t.label());
        }
        out.push('\n');
        for (domain, counts) in &self.semantic_types {
            let _ = write!(out, "{:<12}", domain.name());
            for t in SemanticType::ALL {
                let _ = write!(out, " {:>17}", counts.get(&t).copied().unwrap_or(0));
            }
            out.push('\n');
        }
        out
    }

    /// Most frequent roles.
    pub fn fig3(&self, top: usize) -> String {
        ranked_table("Role", &self.roles, top)
    }

    /// Most frequent properties.
    pub fn fig4(&self, top: usize) -> String {
        ranked_table("Property", &self.properties, top)
    }

    /// Most frequent CS predicate lemmas.
    pub fn predicate_table(&self, top: usize) -> String {
        ranked_table("Predicate", &self.predicates, top)
    }
}

/// Sorted by descending count, ties by key.
pub fn ranked(counts: &BTreeMap<String, usize>) -> Vec<(&str, usize)> {
    let mut v: Vec<_> = counts.iter().map(|(k, c)| (k.as_str(), *c)).collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    v
}

fn ranked_table(header: &str, counts: &BTreeMap<String, usize>, top: usize) -> String {
    let mut out = format!("{header:<24} {:>6}\n", "Count");
    for (k, c) in ranked(counts).into_iter().take(top) {
        let _ = writeln!(out, "{k:<24} {c:>6}");
    }
    out
}

/// Exact counts over a corpus. Semantic types come from the classifier.
pub fn stats(instances: &[AnnotatedInstance], light_verbs: &LightVerbs) -> CorpusStats {
    let mut s = CorpusStats::empty();
    for inst in instances {
        let row = s.domains.get_mut(&inst.domain).expect("all domains present");
        let Some(frame) = inst.frame.as_ref().filter(|_| inst.is_superlative) else {
            row.non_superlatives += 1;
            continue;
        };
        row.superlatives += 1;
        if frame.cs.is_eventive() {
            row.events += 1;
        }
        if frame.implicit {
            row.implicit += 1;
        }
        let t = classify_semantic_type(frame, light_verbs);
        *s.semantic_types
            .get_mut(&inst.domain)
            .expect("all domains present")
            .entry(t)
            .or_default() += 1;
        for arg in frame.target.arguments().iter().chain(frame.cs.arguments()) {
            *s.roles.entry(arg.role.as_str().to_string()).or_default() += 1;
        }
        *s.properties.entry(frame.property.trim().to_lowercase()).or_default() += 1;
        if let Some(ev) = frame.cs.as_event() {
            *s.predicates.entry(ev.lemma()).or_default() += 1;
        }
    }
    for row in s.domains.values() {
        s.total.add(row);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_ratios() {
        let s = CorpusStats::from_rows([
            (Domain::Wikipedia, DomainRow::new(814, 476, 274, 242)),
            (Domain::Reviews, DomainRow::new(1098, 286, 363, 555)),
            (Domain::Dialogue, DomainRow::new(522, 219, 222, 293)),
            (Domain::Literature, DomainRow::new(376, 186, 111, 92)),
            (Domain::Wikinews, DomainRow::new(336, 152, 109, 146)),
        ]);
        assert_eq!(s.total, DomainRow::new(3146, 1319, 1079, 1328));
        assert_eq!(s.implicit_percent(), Some(42.2));
        assert_eq!(s.event_percent(), Some(34.3));
        assert!(s.table1().contains("total          3146   1319   1079     1328"));
    }

    #[test]
    fn empty_ratios_are_absent() {
        let s = stats(&[], &LightVerbs::default());
        assert_eq!(s.total, DomainRow::default());
        assert_eq!(s.implicit_percent(), None);
        assert_eq!(s.domains.len(), 5);
    }

    #[test]
    fn ranking_breaks_ties_by_key() {
        let counts: BTreeMap<String, usize> = [("b", 2), ("a", 2), ("c", 5)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        assert_eq!(ranked(&counts), vec![("c", 5), ("a", 2), ("b", 2)]);
    }
}
