use super::{LightVerbs, SemanticType, SetExpr, SuperlativeFrame};

/// Set-comparison type of a frame, decided by its comparison set.
pub fn classify_semantic_type(frame: &SuperlativeFrame, light_verbs: &LightVerbs) -> SemanticType {
    classify_set_expr(&frame.cs, light_verbs)
}

/// Light-verb event: subject-based; any other event: eventive relative;
/// restricted noun phrase: nominal relative; bare noun phrase: property.
pub fn classify_set_expr(cs: &SetExpr, light_verbs: &LightVerbs) -> SemanticType {
    match cs {
        SetExpr::Eventive(ev) if light_verbs.is_light_event(ev) => SemanticType::SubjectBasedSC,
        SetExpr::Eventive(_) => SemanticType::RelativeSCEventive,
        SetExpr::Nominal(np) if np.restrictions.is_empty() => SemanticType::PropertySC,
        SetExpr::Nominal(_) => SemanticType::RelativeSCNominal,
    }
}
