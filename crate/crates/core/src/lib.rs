//! Superlative frame toolkit.
//!
//! * [`frame`]: the frame data model, its textual notation, validation and
//!   the set-comparison classifier.
//! * [`detector`]: rule-based superlative candidate extraction.
//! * [`corpus`]: corpus JSONL I/O, statistics, splits and discourse
//!   string-matching rates.
//! * [`eval`]: exact match, token IOU, ROUGE-1, role-argument IOU, Cohen's
//!   kappa and the agreement / scoring reports.
//! * [`analysis`]: beam entropy over comparison types, conditional
//!   log-probability preferences and the challenge-set report.

pub mod analysis;
pub mod corpus;
pub mod detector;
pub mod eval;
pub mod frame;
pub mod text;

pub use frame::{
    Anchor, Argument, EventExpression, LightVerbs, NominalExpr, Orientation, Role, RoleInventory, SemanticType,
    SetExpr, SuperlativeFrame,
};
