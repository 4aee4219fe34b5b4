//! Parser and serializer for the frame notation.
//!
//! ```text
//! expr     := eventive | nominal
//! eventive := PRED ws? "(" ws? EVAR ( ws? "," ws? ROLE ws? "=" ws? VALUE )* ws? ")"
//! nominal  := HEAD ( ws ROLE ws? "=" ws? VALUE )*
//! PRED     := [A-Za-z][A-Za-z0-9_]*          (stored uppercase)
//! EVAR     := "e" [0-9]*
//! ROLE     := [A-Za-z][A-Za-z0-9_]*          (uppercase only inside nominals)
//! VALUE    := characters up to the next top-level "," or ")" (eventive) or
//!             the next ROLE "=" (nominal); "=" may only appear nested
//! ```
//!
//! Parentheses must balance everywhere. A lowercase predicate is only read as
//! an event when its first item is an event variable, so `songs (live)` stays
//! a noun phrase. All error offsets count characters, not bytes.

use thiserror::Error;

use super::{Argument, EventExpression, NominalExpr, Role, SetExpr};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("empty frame notation")]
    Empty,
    #[error("unclosed parenthesis at offset {0}")]
    UnclosedParen(usize),
    #[error("unmatched closing parenthesis at offset {0}")]
    UnmatchedClose(usize),
    #[error("missing event variable at offset {0}")]
    MissingEventVar(usize),
    #[error("missing '=' in argument at offset {0}")]
    MissingEquals(usize),
    #[error("empty role at offset {0}")]
    EmptyRole(usize),
    #[error("invalid role {1:?} at offset {0}")]
    InvalidRole(usize, String),
    #[error("empty value at offset {0}")]
    EmptyValue(usize),
    #[error("unexpected '=' at offset {0}")]
    UnexpectedEquals(usize),
    #[error("empty predicate at offset {0}")]
    EmptyPredicate(usize),
    #[error("empty head at offset {0}")]
    EmptyHead(usize),
    #[error("unexpected input after ')' at offset {0}")]
    Trailing(usize),
}

impl NotationError {
    /// Character offset of the error, when it has one.
    pub fn offset(&self) -> Option<usize> {
        use NotationError::*;
        match self {
            Empty => None,
            UnclosedParen(o)
            | UnmatchedClose(o)
            | MissingEventVar(o)
            | MissingEquals(o)
            | EmptyRole(o)
            | InvalidRole(o, _)
            | EmptyValue(o)
            | UnexpectedEquals(o)
            | EmptyPredicate(o)
            | EmptyHead(o)
            | Trailing(o) => Some(*o),
        }
    }
}

type Result<T> = std::result::Result<T, NotationError>;

/// Parses a target or comparison-set string.
pub fn parse_frame_notation(text: &str) -> Result<SetExpr> {
    let chars: Vec<char> = text.chars().collect();
    let start = chars
        .iter()
        .position(|c| !c.is_whitespace())
        .ok_or(NotationError::Empty)?;
    let end = chars.iter().rposition(|c| !c.is_whitespace()).map_or(start, |i| i + 1);
    check_balance(&chars)?;
    let parser = Parser { chars: &chars, end };
    match parser.eventive_open(start) {
        Some(open) => parser.eventive(start, open).map(SetExpr::Eventive),
        None => parser.nominal(start).map(SetExpr::Nominal),
    }
}

/// Canonical rendering: one space after commas, no space around `=`, event
/// variable always `e`.
pub fn serialize_frame(expr: &SetExpr) -> String {
    match expr {
        SetExpr::Eventive(ev) => {
            let mut out = format!("{}(e", ev.predicate);
            for arg in &ev.args {
                out.push_str(&format!(", {}={}", arg.role, arg.value));
            }
            out.push(')');
            out
        }
        SetExpr::Nominal(np) => {
            let mut out = np.head.clone();
            for arg in &np.restrictions {
                out.push_str(&format!(" {}={}", arg.role, arg.value));
            }
            out
        }
    }
}

fn check_balance(chars: &[char]) -> Result<()> {
    let mut open = Vec::new();
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '(' => open.push(i),
            ')' if open.pop().is_none() => return Err(NotationError::UnmatchedClose(i)),
            _ => {}
        }
    }
    match open.first() {
        Some(&i) => Err(NotationError::UnclosedParen(i)),
        None => Ok(()),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_event_var(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next() == Some('e') && chars.all(|c| c.is_ascii_digit())
}

struct Parser<'a> {
    chars: &'a [char],
    end: usize,
}

impl Parser<'_> {
    fn skip_ws(&self, mut i: usize) -> usize {
        while i < self.end && self.chars[i].is_whitespace() {
            i += 1;
        }
        i
    }

    fn text(&self, from: usize, to: usize) -> String {
        self.chars[from..to].iter().collect()
    }

    fn trimmed(&self, from: usize, to: usize) -> (usize, String) {
        let raw = self.text(from, to);
        let lead = raw.chars().take_while(|c| c.is_whitespace()).count();
        (from + lead, raw.trim().to_string())
    }

    /// If the expression starts with `PRED (` and should be read as an
    /// event, returns the offset of the opening parenthesis.
    fn eventive_open(&self, start: usize) -> Option<usize> {
        if !is_ident_start(self.chars[start]) {
            return None;
        }
        let mut i = start;
        while i < self.end && is_ident(self.chars[i]) {
            i += 1;
        }
        let pred_end = i;
        let open = self.skip_ws(i);
        if open >= self.end || self.chars[open] != '(' {
            return None;
        }
        let has_lower = self.chars[start..pred_end].iter().any(|c| c.is_ascii_lowercase());
        if !has_lower {
            return Some(open);
        }
        let (item_end, _) = self.scan_value(open + 1);
        let (_, item) = self.trimmed(open + 1, item_end);
        is_event_var(&item).then_some(open)
    }

    /// Scans a value up to the next top-level `,` or `)`. Returns the end
    /// offset and the offset of the first top-level `=`, if any.
    fn scan_value(&self, from: usize) -> (usize, Option<usize>) {
        let mut depth = 0usize;
        let mut equals = None;
        let mut i = from;
        while i < self.end {
            match self.chars[i] {
                '(' => depth += 1,
                ')' if depth == 0 => break,
                ')' => depth -= 1,
                ',' if depth == 0 => break,
                '=' if depth == 0 && equals.is_none() => equals = Some(i),
                _ => {}
            }
            i += 1;
        }
        (i, equals)
    }

    fn eventive(&self, start: usize, open: usize) -> Result<EventExpression> {
        let predicate: String = self.chars[start..open].iter().collect::<String>().trim().to_uppercase();
        if predicate.is_empty() {
            return Err(NotationError::EmptyPredicate(start));
        }

        let (var_end, var_eq) = self.scan_value(open + 1);
        let (var_at, event_var) = self.trimmed(open + 1, var_end);
        if var_eq.is_some() || !is_event_var(&event_var) {
            return Err(NotationError::MissingEventVar(var_at));
        }

        let mut args = Vec::new();
        let mut i = var_end;
        loop {
            if i >= self.end {
                // Balance was checked, so this only happens on a malformed tail.
                return Err(NotationError::UnclosedParen(open));
            }
            if self.chars[i] == ')' {
                let rest = self.skip_ws(i + 1);
                if rest < self.end {
                    return Err(NotationError::Trailing(rest));
                }
                break;
            }
            // chars[i] == ','
            let arg_start = i + 1;
            let (value_end, equals) = self.scan_value(arg_start);
            let eq = equals.ok_or(NotationError::MissingEquals(self.skip_ws(arg_start)))?;
            let (role_at, role_text) = self.trimmed(arg_start, eq);
            if role_text.is_empty() {
                return Err(NotationError::EmptyRole(role_at));
            }
            let role = Role::new(&role_text).ok_or_else(|| NotationError::InvalidRole(role_at, role_text.clone()))?;
            let (value_at, value) = self.trimmed(eq + 1, value_end);
            if value.is_empty() {
                return Err(NotationError::EmptyValue(value_at));
            }
            if let Some(extra) = self.top_level_equals(eq + 1, value_end) {
                return Err(NotationError::UnexpectedEquals(extra));
            }
            args.push(Argument { role, value });
            i = value_end;
        }

        Ok(EventExpression {
            predicate,
            event_var,
            args,
        })
    }

    fn top_level_equals(&self, from: usize, to: usize) -> Option<usize> {
        let mut depth = 0usize;
        for i in from..to {
            match self.chars[i] {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                '=' if depth == 0 => return Some(i),
                _ => {}
            }
        }
        None
    }

    fn nominal(&self, start: usize) -> Result<NominalExpr> {
        // Each top-level '=' closes a ROLE token; collect (role_start, eq) pairs.
        let mut markers = Vec::new();
        let mut depth = 0usize;
        for i in start..self.end {
            match self.chars[i] {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                '=' if depth == 0 => {
                    let mut j = i;
                    while j > start && self.chars[j - 1].is_whitespace() {
                        j -= 1;
                    }
                    let role_end = j;
                    while j > start && is_ident(self.chars[j - 1]) {
                        j -= 1;
                    }
                    if j == role_end {
                        return Err(NotationError::EmptyRole(i));
                    }
                    let role_text = self.text(j, role_end);
                    let valid = is_ident_start(self.chars[j])
                        && role_text
                            .chars()
                            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_');
                    if !valid || (j > start && !self.chars[j - 1].is_whitespace()) {
                        return Err(NotationError::InvalidRole(j, role_text));
                    }
                    markers.push((j, role_end, i));
                }
                _ => {}
            }
        }

        let head_end = markers.first().map_or(self.end, |m| m.0);
        let (_, head) = self.trimmed(start, head_end);
        if head.is_empty() {
            return Err(NotationError::EmptyHead(start));
        }

        let mut restrictions = Vec::with_capacity(markers.len());
        for (k, &(role_start, role_end, eq)) in markers.iter().enumerate() {
            let value_end = markers.get(k + 1).map_or(self.end, |m| m.0);
            let (value_at, value) = self.trimmed(eq + 1, value_end);
            if value.is_empty() {
                return Err(NotationError::EmptyValue(value_at));
            }
            let role = Role::new(&self.text(role_start, role_end)).expect("validated role token");
            restrictions.push(Argument { role, value });
        }

        Ok(NominalExpr { head, restrictions })
    }
}
