//! Argument knowledge graphs from pre-annotated argumentative text.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! 1. [`annotation`]: brat standoff or canonical JSON into an [`AnnotatedDocument`].
//! 2. [`markers`]: inference-marker detection over the raw text.
//! 3. [`ekb`]: formulas, inference rules, contrary/agreement functions and
//!    preference orders assembled into an [`Ekb`].
//! 4. [`kb_graph`]: the attributed KB graph.
//! 5. [`arguments`]: modus-ponens closure and argument numbering.
//! 6. [`akg`]: the argument knowledge graph with typed attacks.
//! 7. [`semantics`]: Dung projection, naive and preferred extensions.
//! 8. [`export`] and [`pipeline`]: DOT / JSON / apx output and the driver.

pub mod akg;
pub mod annotation;
pub mod arguments;
pub mod attributes;
pub mod diagnostics;
pub mod ekb;
pub mod export;
pub mod ids;
pub mod kb_graph;
pub mod markers;
pub mod pipeline;
pub mod semantics;
pub mod text;

pub use akg::{
    build_akg, classify_attack, convert_stances, prune_redundant_support, Akg, AkgEdge, AkgError, AkgNode,
    AkgNodeKind, AttackType, EdgeKind,
};
pub use annotation::{
    parse_brat_ann, parse_canonical_json, to_canonical_json, validate_document, AnnotatedDocument,
    ComponentAnnotation, ComponentKind, IngestError, RelationAnnotation, RelationKind, Stance,
    StanceAnnotation, TextDocument, Violation,
};
pub use arguments::{
    apply_modus_ponens, classify_consequent_role, derive_argument_set, derive_argument_set_with_warnings,
    Argument, ArgumentError, ArgumentKind, ArgumentSet, Content, MpApplication,
};
pub use attributes::{AttrValue, AttributeBox};
pub use diagnostics::Warning;
pub use ekb::{
    build_ekb, parse_kind_overrides, validate_ekb, Ekb, EkbConfig, EkbError, EkbViolation, ElementId,
    Formula, InferenceRule, PreferenceConfig, PremiseKind, RuleKind,
};
pub use export::{export_akg_dot, export_apx, export_kb_dot, to_json, DotOptions};
pub use kb_graph::{build_kb_graph, KbEdge, KbEdgeKind, KbGraph, KbNode, KbNodeKind};
pub use markers::{
    detect_ims, load_lexicon, resolve_implicit_ims, Heuristic, ImMatch, Indicator, LexiconError,
    MarkerLexicon,
};
pub use pipeline::{
    process_document, run_pipeline, DocumentOutput, ExitReport, Format, InputSpec, PipelineConfig,
    PipelineError, PipelineOptions,
};
pub use semantics::{
    naive_extensions, oracle_extensions, preferred_extensions, project_af, AfProjection, Extension,
    ExtensionLabel, OracleSemantics, SemanticsError, SemanticsReport, DEFAULT_CAP,
};
pub use text::Span;
