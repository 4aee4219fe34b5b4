//! The superlative frame data model.
//!
//! A frame records one interpretation of a superlative occurrence: the
//! target, the comparison set (CS), which CS position is compared (the
//! anchor), the property, orientation, rank, whether restrictions come from
//! outside the sentence, and the realized amount. Targets and comparison sets
//! are written in a small Neo-Davidsonian notation, see [`notation`].

mod classify;
mod lexicon;
pub mod notation;
mod validate;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use classify::{classify_semantic_type, classify_set_expr};
pub(crate) use lexicon::list_entries as lexicon_entries;
pub use lexicon::{LightVerbs, RoleInventory};
pub use notation::{parse_frame_notation, serialize_frame, NotationError};
pub use validate::{validate_frame, Severity, Violation};

/// A semantic role label such as `AGENT` or the bridging label `OF`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Role(String);

impl Role {
    /// The bridging-relation label.
    pub const OF: &'static str = "OF";

    /// Builds a role from any casing; the stored name is uppercase.
    ///
    /// Returns `None` for an empty name or one with characters outside
    /// `[A-Za-z0-9_]`, or one that does not start with a letter.
    pub fn new(name: &str) -> Option<Role> {
        let mut chars = name.chars();
        let first = chars.next()?;
        if !first.is_ascii_alphabetic() || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        Some(Role(name.to_ascii_uppercase()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Role {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Role::new(&raw).ok_or_else(|| serde::de::Error::custom(format!("invalid role label {raw:?}")))
    }
}

/// A role-labelled argument; the value is kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Argument {
    pub role: Role,
    pub value: String,
}

impl Argument {
    pub fn new(role: Role, value: impl Into<String>) -> Self {
        Argument {
            role,
            value: value.into(),
        }
    }
}

fn same_multiset(a: &[Argument], b: &[Argument]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut left: Vec<_> = a.iter().map(|x| (&x.role, &x.value)).collect();
    let mut right: Vec<_> = b.iter().map(|x| (&x.role, &x.value)).collect();
    left.sort();
    right.sort();
    left == right
}

/// `PRED(e, ROLE=value, ...)`.
///
/// Equality ignores argument order and the name of the event variable.
/// Use [`EventExpression::identical`] for a verbatim comparison.
#[derive(Debug, Clone, Eq)]
pub struct EventExpression {
    pub predicate: String,
    pub event_var: String,
    pub args: Vec<Argument>,
}

impl EventExpression {
    pub fn new(predicate: &str, args: Vec<Argument>) -> Self {
        EventExpression {
            predicate: predicate.to_uppercase(),
            event_var: "e".to_string(),
            args,
        }
    }

    /// Ordered comparison, argument order included.
    pub fn identical(&self, other: &Self) -> bool {
        self.predicate == other.predicate && self.args == other.args
    }

    /// The predicate lemma in lowercase, e.g. `be_hungry`.
    pub fn lemma(&self) -> String {
        self.predicate.to_lowercase()
    }
}

impl PartialEq for EventExpression {
    fn eq(&self, other: &Self) -> bool {
        self.predicate == other.predicate && same_multiset(&self.args, &other.args)
    }
}

/// A head noun phrase with optional `ROLE=value` restrictions, e.g.
/// `writers OF=the ancient world`.
#[derive(Debug, Clone, Eq)]
pub struct NominalExpr {
    pub head: String,
    pub restrictions: Vec<Argument>,
}

impl NominalExpr {
    pub fn new(head: impl Into<String>, restrictions: Vec<Argument>) -> Self {
        NominalExpr {
            head: head.into(),
            restrictions,
        }
    }

    pub fn identical(&self, other: &Self) -> bool {
        self.head == other.head && self.restrictions == other.restrictions
    }
}

impl PartialEq for NominalExpr {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && same_multiset(&self.restrictions, &other.restrictions)
    }
}

/// A target or comparison set: either an event or a restricted noun phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetExpr {
    Eventive(EventExpression),
    Nominal(NominalExpr),
}

impl SetExpr {
    pub fn nominal(head: impl Into<String>) -> Self {
        SetExpr::Nominal(NominalExpr::new(head, Vec::new()))
    }

    pub fn is_eventive(&self) -> bool {
        matches!(self, SetExpr::Eventive(_))
    }

    pub fn as_event(&self) -> Option<&EventExpression> {
        match self {
            SetExpr::Eventive(ev) => Some(ev),
            SetExpr::Nominal(_) => None,
        }
    }

    /// Role-labelled arguments (event arguments or nominal restrictions).
    pub fn arguments(&self) -> &[Argument] {
        match self {
            SetExpr::Eventive(ev) => &ev.args,
            SetExpr::Nominal(np) => &np.restrictions,
        }
    }

    /// Verbatim comparison including argument order.
    pub fn identical(&self, other: &Self) -> bool {
        match (self, other) {
            (SetExpr::Eventive(a), SetExpr::Eventive(b)) => a.identical(b),
            (SetExpr::Nominal(a), SetExpr::Nominal(b)) => a.identical(b),
            _ => false,
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_frame(self))
    }
}

impl std::str::FromStr for SetExpr {
    type Err = NotationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_frame_notation(s)
    }
}

impl Serialize for SetExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&serialize_frame(self))
    }
}

impl<'de> Deserialize<'de> for SetExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        parse_frame_notation(&raw).map_err(serde::de::Error::custom)
    }
}

/// Position of the compared element inside the CS.
///
/// Index 0 with no role designates the head of a nominal CS; positive
/// indices are 1-based positions in the CS argument list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Anchor {
    pub index: usize,
    #[serde(default)]
    pub role: Option<Role>,
}

impl Anchor {
    pub fn head() -> Self {
        Anchor { index: 0, role: None }
    }

    pub fn at(index: usize, role: Role) -> Self {
        Anchor {
            index,
            role: Some(role),
        }
    }

    /// The CS text the anchor points at, if the index is in range.
    pub fn resolve<'a>(&self, cs: &'a SetExpr) -> Option<&'a str> {
        match (self.index, cs) {
            (0, SetExpr::Nominal(np)) => Some(&np.head),
            (0, SetExpr::Eventive(_)) => None,
            (i, _) => cs.arguments().get(i - 1).map(|a| a.value.as_str()),
        }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.role {
            Some(role) => write!(f, "#{}={}", self.index, role),
            None => write!(f, "#{}", self.index),
        }
    }
}

/// Whether the max (positive) or min (negative) operation applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[serde(alias = "+")]
    Positive,
    #[serde(alias = "-")]
    Negative,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Positive => "positive",
            Orientation::Negative => "negative",
        }
    }
}

/// The four set-comparison categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemanticType {
    #[serde(rename = "property")]
    PropertySC,
    #[serde(rename = "relative_eventive")]
    RelativeSCEventive,
    #[serde(rename = "relative_nominal")]
    RelativeSCNominal,
    #[serde(rename = "subject_based")]
    SubjectBasedSC,
}

impl SemanticType {
    pub const ALL: [SemanticType; 4] = [
        SemanticType::PropertySC,
        SemanticType::RelativeSCEventive,
        SemanticType::RelativeSCNominal,
        SemanticType::SubjectBasedSC,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SemanticType::PropertySC => "property",
            SemanticType::RelativeSCEventive => "relative_eventive",
            SemanticType::RelativeSCNominal => "relative_nominal",
            SemanticType::SubjectBasedSC => "subject_based",
        }
    }

    /// Absolute readings are the unrestricted property comparisons; every
    /// other type is a relative reading.
    pub fn is_absolute(self) -> bool {
        self == SemanticType::PropertySC
    }
}

impl fmt::Display for SemanticType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn default_rank() -> u32 {
    1
}

/// One complete interpretation of a superlative occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperlativeFrame {
    pub target: SetExpr,
    pub cs: SetExpr,
    pub anchor: Anchor,
    pub property: String,
    pub orientation: Orientation,
    #[serde(default = "default_rank")]
    pub rank: u32,
    #[serde(default)]
    pub implicit: bool,
    #[serde(default)]
    pub amount: Option<String>,
    /// Annotated set-comparison type, when the source data carries one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semantic_type: Option<SemanticType>,
}

impl SuperlativeFrame {
    /// The text of the anchored CS element, or the anchor notation when the
    /// index does not resolve.
    pub fn anchor_text(&self) -> String {
        self.anchor
            .resolve(&self.cs)
            .map(str::to_string)
            .unwrap_or_else(|| self.anchor.to_string())
    }

    /// Single-line rendering of all slots, used for whole-frame predictions.
    pub fn render(&self) -> String {
        let mut out = format!(
            "TARGET: {} CS: {} ANCHOR: {} PROPERTY: {} ORIENTATION: {}",
            self.target,
            self.cs,
            self.anchor_text(),
            self.property,
            self.orientation.as_str()
        );
        if self.rank != 1 {
            out.push_str(&format!(" RANK: {}", self.rank));
        }
        out.push_str(if self.implicit {
            " IMPLICIT: true"
        } else {
            " IMPLICIT: false"
        });
        if let Some(amount) = &self.amount {
            out.push_str(&format!(" AMOUNT: {amount}"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn role(s: &str) -> Role {
        Role::new(s).unwrap()
    }

    #[test]
    fn roles_are_uppercased_and_checked() {
        assert_eq!(role("agent").as_str(), "AGENT");
        assert_eq!(role("CO_AGENT").as_str(), "CO_AGENT");
        assert!(Role::new("").is_none());
        assert!(Role::new("_X").is_none());
        assert!(Role::new("AG ENT").is_none());
    }

    #[test]
    fn event_equality_ignores_order_and_variable() {
        let a = EventExpression::new(
            "PAY",
            vec![
                Argument::new(role("AGENT"), "people"),
                Argument::new(role("ASSET"), "Visa cards"),
            ],
        );
        let mut b = EventExpression::new(
            "PAY",
            vec![
                Argument::new(role("ASSET"), "Visa cards"),
                Argument::new(role("AGENT"), "people"),
            ],
        );
        b.event_var = "e1".into();
        assert_eq!(a, b);
        assert!(!a.identical(&b));
    }

    #[test]
    fn anchor_resolution() {
        let cs: SetExpr = "PAY(e, AGENT=people, ASSET=Visa cards)".parse().unwrap();
        assert_eq!(Anchor::at(2, role("ASSET")).resolve(&cs), Some("Visa cards"));
        assert_eq!(Anchor::at(3, role("ASSET")).resolve(&cs), None);
        assert_eq!(Anchor::head().resolve(&SetExpr::nominal("birds")), Some("birds"));
        assert_eq!(Anchor::at(2, role("ASSET")).to_string(), "#2=ASSET");
    }

    #[test]
    fn frame_json_uses_notation_strings() {
        let json = r#"{"target":"Visa Gold","cs":"PAY(e, AGENT=people, ASSET=Visa cards)",
            "anchor":{"index":2,"role":"ASSET"},"property":"popularity","orientation":"+"}"#;
        let frame: SuperlativeFrame = serde_json::from_str(json).unwrap();
        assert_eq!(frame.rank, 1);
        assert!(!frame.implicit);
        assert_eq!(frame.orientation, Orientation::Positive);
        let back = serde_json::to_string(&frame).unwrap();
        assert!(back.contains(r#""cs":"PAY(e, AGENT=people, ASSET=Visa cards)""#));
        let again: SuperlativeFrame = serde_json::from_str(&back).unwrap();
        assert_eq!(frame, again);
    }
}
