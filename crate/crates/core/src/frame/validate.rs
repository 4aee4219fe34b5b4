use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{RoleInventory, SetExpr, SuperlativeFrame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

/// One broken frame invariant. Violations are data: validation never fails.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub severity: Severity,
    /// The slot the violation belongs to (`rank`, `anchor`, `cs`, ...).
    pub field: String,
    pub message: String,
}

impl Violation {
    fn new(severity: Severity, field: &str, message: impl Into<String>) -> Self {
        Violation {
            severity,
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev} [{}]: {}", self.field, self.message)
    }
}

/// Checks every frame invariant.
///
/// Rank, property and empty-structure violations are always errors. Role
/// inventory membership, duplicate roles and anchor consistency are errors in
/// `strict` mode and warnings otherwise. A target/CS predicate mismatch is
/// always a warning.
pub fn validate_frame(frame: &SuperlativeFrame, roles: &RoleInventory, strict: bool) -> Vec<Violation> {
    let soft = if strict { Severity::Error } else { Severity::Warning };
    let mut out = Vec::new();

    if frame.rank < 1 {
        out.push(Violation::new(Severity::Error, "rank", "rank must be ≥ 1"));
    }
    if frame.property.trim().is_empty() {
        out.push(Violation::new(
            Severity::Error,
            "property",
            "property must be non-empty",
        ));
    }

    for (field, expr) in [("target", &frame.target), ("cs", &frame.cs)] {
        check_expr(field, expr, roles, soft, &mut out);
    }

    check_anchor(frame, soft, &mut out);

    if let (SetExpr::Eventive(t), SetExpr::Eventive(c)) = (&frame.target, &frame.cs) {
        if t.predicate != c.predicate {
            out.push(Violation::new(
                Severity::Warning,
                "target",
                format!(
                    "target predicate {} differs from CS predicate {}",
                    t.predicate, c.predicate
                ),
            ));
        }
    }

    out
}

fn check_expr(field: &str, expr: &SetExpr, roles: &RoleInventory, soft: Severity, out: &mut Vec<Violation>) {
    match expr {
        SetExpr::Eventive(ev) if ev.predicate.trim().is_empty() => {
            out.push(Violation::new(Severity::Error, field, "predicate must be non-empty"));
        }
        SetExpr::Nominal(np) if np.head.trim().is_empty() => {
            out.push(Violation::new(Severity::Error, field, "nominal head must be non-empty"));
        }
        _ => {}
    }

    let mut seen = BTreeSet::new();
    for arg in expr.arguments() {
        if !roles.contains(&arg.role) {
            out.push(Violation::new(soft, field, format!("unknown role {}", arg.role)));
        }
        if !seen.insert(&arg.role) {
            out.push(Violation::new(soft, field, format!("duplicate role {}", arg.role)));
        }
        if arg.value.trim().is_empty() {
            out.push(Violation::new(
                Severity::Error,
                field,
                format!("empty value for role {}", arg.role),
            ));
        }
    }
}

fn check_anchor(frame: &SuperlativeFrame, soft: Severity, out: &mut Vec<Violation>) {
    let anchor = &frame.anchor;
    let args = frame.cs.arguments();

    if anchor.index == 0 {
        match (&frame.cs, &anchor.role) {
            (SetExpr::Nominal(_), None) => {}
            (SetExpr::Nominal(_), Some(role)) => out.push(Violation::new(
                soft,
                "anchor",
                format!("anchor #0 designates the head and takes no role (got {role})"),
            )),
            (SetExpr::Eventive(_), _) => out.push(Violation::new(soft, "anchor", "anchor index out of range")),
        }
        return;
    }

    let Some(arg) = args.get(anchor.index - 1) else {
        out.push(Violation::new(soft, "anchor", "anchor index out of range"));
        return;
    };
    match &anchor.role {
        Some(role) if *role == arg.role => {}
        Some(role) => out.push(Violation::new(
            soft,
            "anchor",
            format!("anchor role mismatch: #{} is {}, not {}", anchor.index, arg.role, role),
        )),
        None => out.push(Violation::new(
            soft,
            "anchor",
            format!("anchor #{} is missing its role", anchor.index),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{Anchor, Orientation, Role};

    fn pay_frame(anchor: Anchor) -> SuperlativeFrame {
        SuperlativeFrame {
            target: "Visa Gold".parse().unwrap(),
            cs: "PAY(e, AGENT=people, ASSET=Visa cards, LOCATION=in Romania, TIME=in 2004)"
                .parse()
                .unwrap(),
            anchor,
            property: "popularity".into(),
            orientation: Orientation::Positive,
            rank: 1,
            implicit: true,
            amount: Some("800,000 cards issued".into()),
            semantic_type: None,
        }
    }

    fn role(s: &str) -> Role {
        Role::new(s).unwrap()
    }

    fn messages(v: &[Violation]) -> Vec<&str> {
        v.iter().map(|x| x.message.as_str()).collect()
    }

    #[test]
    fn worked_example_is_clean() {
        let frame = pay_frame(Anchor::at(2, role("ASSET")));
        assert!(validate_frame(&frame, &RoleInventory::default(), true).is_empty());
    }

    #[test]
    fn rank_zero() {
        let mut frame = pay_frame(Anchor::at(2, role("ASSET")));
        frame.rank = 0;
        let v = validate_frame(&frame, &RoleInventory::default(), false);
        assert_eq!(messages(&v), vec!["rank must be ≥ 1"]);
        assert!(v[0].is_error());
    }

    #[test]
    fn anchor_out_of_range() {
        let frame = pay_frame(Anchor::at(5, role("ASSET")));
        let strict = validate_frame(&frame, &RoleInventory::default(), true);
        assert_eq!(messages(&strict), vec!["anchor index out of range"]);
        assert!(strict[0].is_error());
        let lenient = validate_frame(&frame, &RoleInventory::default(), false);
        assert_eq!(lenient[0].severity, Severity::Warning);
    }

    #[test]
    fn anchor_role_mismatch_and_missing_role() {
        let v = validate_frame(
            &pay_frame(Anchor::at(2, role("AGENT"))),
            &RoleInventory::default(),
            true,
        );
        assert_eq!(messages(&v), vec!["anchor role mismatch: #2 is ASSET, not AGENT"]);
        let v = validate_frame(
            &pay_frame(Anchor { index: 1, role: None }),
            &RoleInventory::default(),
            true,
        );
        assert_eq!(messages(&v), vec!["anchor #1 is missing its role"]);
        let v = validate_frame(&pay_frame(Anchor::head()), &RoleInventory::default(), true);
        assert_eq!(messages(&v), vec!["anchor index out of range"]);
    }

    #[test]
    fn nominal_head_anchor() {
        let mut frame = pay_frame(Anchor::head());
        frame.cs = "birds".parse().unwrap();
        frame.target = "Eagles LOCATION=northern mountains".parse().unwrap();
        assert!(validate_frame(&frame, &RoleInventory::default(), true).is_empty());
        frame.anchor = Anchor::at(0, role("OF"));
        assert_eq!(validate_frame(&frame, &RoleInventory::default(), true).len(), 1);
    }

    #[test]
    fn roles_and_duplicates_depend_on_strictness() {
        let mut frame = pay_frame(Anchor::at(1, role("AGENT")));
        frame.cs = "PAY(e, AGENT=people, WIDGET=x, AGENT=others)".parse().unwrap();
        let strict = validate_frame(&frame, &RoleInventory::default(), true);
        assert_eq!(messages(&strict), vec!["unknown role WIDGET", "duplicate role AGENT"]);
        assert!(strict.iter().all(Violation::is_error));
        let lenient = validate_frame(&frame, &RoleInventory::default(), false);
        assert!(lenient.iter().all(|v| v.severity == Severity::Warning));
    }

    #[test]
    fn predicate_mismatch_is_a_warning() {
        let mut frame = pay_frame(Anchor::at(2, role("ASSET")));
        frame.target = "USE(e, ASSET=Visa Gold)".parse().unwrap();
        let v = validate_frame(&frame, &RoleInventory::default(), true);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].severity, Severity::Warning);
        frame.target = "PAY(e, ASSET=Visa Gold)".parse().unwrap();
        assert!(validate_frame(&frame, &RoleInventory::default(), true).is_empty());
    }

    #[test]
    fn empty_property() {
        let mut frame = pay_frame(Anchor::at(2, role("ASSET")));
        frame.property = "  ".into();
        assert_eq!(
            messages(&validate_frame(&frame, &RoleInventory::default(), true)),
            vec!["property must be non-empty"]
        );
    }
}
