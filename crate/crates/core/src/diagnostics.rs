use std::fmt;

use serde::Serialize;

use crate::text::Span;

/// Non-fatal conditions raised while building the graphs. These are data,
/// collected by the pipeline and printed in its report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "code", rename_all = "kebab-case")]
pub enum Warning {
    DuplicateStance { claim: String, kept: String },
    UnalignedIm { surface: String, span: Span },
    RuleContradictsAnnotation { surface: String, span: Span },
    DuplicateRule { surface: String, span: Span },
    NoBoundaryFound { source: Span, target: Span },
    UnresolvedRuleSpan { comp_id: String },
    DroppedRelation { rel_id: String, reason: String },
    BlockedDerivation { rule: String },
    PrunedSupport { source: String, target: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::DuplicateStance { claim, kept } => {
                write!(f, "claim {claim} has several stances; kept {kept}")
            }
            Warning::UnalignedIm { surface, span } => write!(
                f,
                "marker {surface:?} at {}..{} aligns with no component pair; dropped",
                span.start, span.end
            ),
            Warning::RuleContradictsAnnotation { surface, span } => write!(
                f,
                "marker {surface:?} at {}..{} contradicts an annotated relation; dropped",
                span.start, span.end
            ),
            Warning::DuplicateRule { surface, span } => write!(
                f,
                "marker {surface:?} at {}..{} repeats an existing rule; dropped",
                span.start, span.end
            ),
            Warning::NoBoundaryFound { source, target } => write!(
                f,
                "no sentence boundary between {}..{} and {}..{}; implicit marker skipped",
                source.start, source.end, target.start, target.end
            ),
            Warning::UnresolvedRuleSpan { comp_id } => {
                write!(f, "rule span {comp_id} does not contain exactly one detected rule")
            }
            Warning::DroppedRelation { rel_id, reason } => {
                write!(f, "relation {rel_id} dropped: {reason}")
            }
            Warning::BlockedDerivation { rule } => {
                write!(f, "rule {rule} fires into an already atomic argument; derivation skipped")
            }
            Warning::PrunedSupport { source, target } => {
                write!(f, "support {source} -> {target} replaced by modus ponens edges")
            }
        }
    }
}
