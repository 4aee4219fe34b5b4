use std::collections::BTreeSet;

use super::{EventExpression, Role};

const DEFAULT_ROLES: &str = include_str!("../../resources/roles.txt");
const DEFAULT_LIGHT_VERBS: &str = include_str!("../../resources/light_verbs.txt");

/// Non-empty, non-comment lines of a plain-text list.
pub(crate) fn list_entries(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

/// Closed set of role labels accepted by strict validation. `OF` is always a
/// member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleInventory {
    roles: BTreeSet<Role>,
}

impl RoleInventory {
    /// Parses one label per line; `#` starts a comment. Returns the invalid
    /// line on error.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut roles = BTreeSet::new();
        for entry in list_entries(text) {
            roles.insert(Role::new(entry).ok_or_else(|| entry.to_string())?);
        }
        roles.insert(Role::new(Role::OF).expect("static role"));
        Ok(RoleInventory { roles })
    }

    pub fn contains(&self, role: &Role) -> bool {
        self.roles.contains(role)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Role> {
        self.roles.iter()
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }
}

impl Default for RoleInventory {
    fn default() -> Self {
        RoleInventory::parse(DEFAULT_ROLES).expect("bundled role list is valid")
    }
}

/// Lemmas of light verbs, lowercase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightVerbs {
    lemmas: BTreeSet<String>,
}

impl LightVerbs {
    pub fn parse(text: &str) -> Self {
        LightVerbs {
            lemmas: list_entries(text).map(str::to_lowercase).collect(),
        }
    }

    /// True for a predicate whose lemma is listed, or for any `BE_*` compound.
    pub fn is_light(&self, predicate: &str) -> bool {
        let lemma = predicate.to_lowercase();
        lemma.starts_with("be_") || self.lemmas.contains(&lemma)
    }

    pub fn is_light_event(&self, event: &EventExpression) -> bool {
        self.is_light(&event.predicate)
    }
}

impl Default for LightVerbs {
    fn default() -> Self {
        LightVerbs::parse(DEFAULT_LIGHT_VERBS)
    }
}
