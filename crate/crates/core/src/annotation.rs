//! Annotated argumentative documents: brat standoff and canonical JSON input.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagnostics::Warning;
use crate::text::{paragraph_spans, CharText, Span};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TextDocument {
    pub doc_id: String,
    pub raw_text: String,
    pub paragraph_spans: Vec<Span>,
}

impl TextDocument {
    /// CRLF is folded to LF before any offset is interpreted.
    pub fn new(doc_id: impl Into<String>, raw_text: &str) -> Self {
        let raw_text = raw_text.replace("\r\n", "\n");
        let paragraph_spans = paragraph_spans(&raw_text);
        TextDocument { doc_id: doc_id.into(), raw_text, paragraph_spans }
    }

    pub fn char_len(&self) -> usize {
        self.raw_text.chars().count()
    }

    pub fn slice(&self, span: Span) -> Option<&str> {
        CharText::new(&self.raw_text).slice(span)
    }

    /// Index of the paragraph holding `offset`; offsets in blank gaps belong
    /// to the preceding paragraph.
    pub fn paragraph_of(&self, offset: usize) -> Option<usize> {
        self.paragraph_spans.iter().rposition(|p| p.start <= offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    MajorClaim,
    Claim,
    Premise,
    /// A span marking an inference rule, so relations can target the rule.
    InferenceRule,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::MajorClaim => "MajorClaim",
            ComponentKind::Claim => "Claim",
            ComponentKind::Premise => "Premise",
            ComponentKind::InferenceRule => "InferenceRule",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "MajorClaim" => Some(ComponentKind::MajorClaim),
            "Claim" => Some(ComponentKind::Claim),
            "Premise" => Some(ComponentKind::Premise),
            "InferenceRule" => Some(ComponentKind::InferenceRule),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentAnnotation {
    pub comp_id: String,
    pub kind: ComponentKind,
    /// `None` for implicit components (enthymemes).
    pub span: Option<Span>,
    pub surface_text: String,
    pub paragraph: Option<usize>,
}

impl ComponentAnnotation {
    pub fn is_implicit(&self) -> bool {
        self.span.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    #[serde(alias = "Supports")]
    Supports,
    #[serde(alias = "Attacks")]
    Attacks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationAnnotation {
    pub rel_id: String,
    pub kind: RelationKind,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stance {
    For,
    Against,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StanceAnnotation {
    pub attr_id: String,
    pub claim: String,
    pub stance: Stance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnotatedDocument {
    pub document: TextDocument,
    pub components: Vec<ComponentAnnotation>,
    pub relations: Vec<RelationAnnotation>,
    pub stances: Vec<StanceAnnotation>,
}

impl AnnotatedDocument {
    pub fn component(&self, comp_id: &str) -> Option<&ComponentAnnotation> {
        self.components.iter().find(|c| c.comp_id == comp_id)
    }

    pub fn doc_id(&self) -> &str {
        &self.document.doc_id
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation")]
pub enum Violation {
    DuplicateId { id: String },
    DanglingReference { referrer: String, missing: String },
    SpanMismatch { comp_id: String },
    SelfRelation { rel_id: String },
    StanceOnNonClaim { attr_id: String, claim: String },
    BadParagraphSpans,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId { id } => write!(f, "duplicate id {id}"),
            Violation::DanglingReference { referrer, missing } => {
                write!(f, "{referrer} references missing component {missing}")
            }
            Violation::SpanMismatch { comp_id } => {
                write!(f, "{comp_id}: span does not match the document text")
            }
            Violation::SelfRelation { rel_id } => write!(f, "{rel_id} relates a component to itself"),
            Violation::StanceOnNonClaim { attr_id, claim } => {
                write!(f, "{attr_id}: stance target {claim} is not a Claim")
            }
            Violation::BadParagraphSpans => write!(f, "paragraph spans overlap or exceed the text"),
        }
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}: {content:?}")]
    MalformedLine { line: usize, content: String, reason: String },
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("invalid document: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn component(doc: &TextDocument, comp_id: String, kind: ComponentKind, span: Span, surface: Option<String>) -> ComponentAnnotation {
    let surface_text = surface.unwrap_or_else(|| doc.slice(span).unwrap_or_default().to_string());
    ComponentAnnotation {
        comp_id,
        kind,
        span: Some(span),
        surface_text,
        paragraph: doc.paragraph_of(span.start),
    }
}

/// Keep the last stance per claim.
fn dedupe_stances(stances: Vec<StanceAnnotation>, warnings: &mut Vec<Warning>) -> Vec<StanceAnnotation> {
    let mut last: HashMap<&str, usize> = HashMap::new();
    for (i, s) in stances.iter().enumerate() {
        last.insert(&s.claim, i);
    }
    let keep: HashSet<usize> = last.values().copied().collect();
    for (i, s) in stances.iter().enumerate() {
        if !keep.contains(&i) {
            let kept = &stances[last[s.claim.as_str()]];
            warnings.push(Warning::DuplicateStance { claim: s.claim.clone(), kept: kept.attr_id.clone() });
            log::warn!("claim {} has several stances, keeping {}", s.claim, kept.attr_id);
        }
    }
    stances.into_iter().enumerate().filter(|(i, _)| keep.contains(i)).map(|(_, s)| s).collect()
}

fn finish(doc: AnnotatedDocument) -> Result<AnnotatedDocument, IngestError> {
    let violations = validate_document(&doc);
    if violations.is_empty() {
        Ok(doc)
    } else {
        Err(IngestError::Invalid(violations))
    }
}

/// Parse a brat `.txt`/`.ann` pair.
pub fn parse_brat_ann(doc_id: &str, txt: &str, ann: &str) -> Result<AnnotatedDocument, IngestError> {
    parse_brat_ann_with_warnings(doc_id, txt, ann).map(|(doc, _)| doc)
}

pub fn parse_brat_ann_with_warnings(
    doc_id: &str,
    txt: &str,
    ann: &str,
) -> Result<(AnnotatedDocument, Vec<Warning>), IngestError> {
    let document = TextDocument::new(doc_id, txt);
    let mut components = Vec::new();
    let mut relations = Vec::new();
    let mut stances = Vec::new();

    for (idx, raw) in ann.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: &str| IngestError::MalformedLine {
            line: idx + 1,
            content: line.to_string(),
            reason: reason.to_string(),
        };
        let mut fields = line.splitn(3, '\t');
        let id = fields.next().unwrap_or_default();
        let body = fields.next().ok_or_else(|| malformed("missing tab-separated body"))?;
        match id.chars().next() {
            Some('T') => {
                let text = fields.next().ok_or_else(|| malformed("missing span text"))?;
                if body.contains(';') {
                    return Err(malformed("discontinuous spans are not supported"));
                }
                let parts: Vec<&str> = body.split(' ').collect();
                let [ty, start, end] = parts[..] else {
                    return Err(malformed("expected `<Type> <start> <end>`"));
                };
                let kind = ComponentKind::parse(ty).ok_or_else(|| malformed("unknown component type"))?;
                let start: usize = start.parse().map_err(|_| malformed("bad start offset"))?;
                let end: usize = end.parse().map_err(|_| malformed("bad end offset"))?;
                components.push(component(&document, id.to_string(), kind, Span::new(start, end), Some(text.to_string())));
            }
            Some('R') => {
                let parts: Vec<&str> = body.split(' ').collect();
                let [ty, a1, a2] = parts[..] else {
                    return Err(malformed("expected `<type> Arg1:<id> Arg2:<id>`"));
                };
                let kind = match ty.to_ascii_lowercase().as_str() {
                    "supports" => RelationKind::Supports,
                    "attacks" => RelationKind::Attacks,
                    _ => return Err(malformed("unknown relation type")),
                };
                let source = a1.strip_prefix("Arg1:").ok_or_else(|| malformed("expected Arg1:"))?;
                let target = a2.strip_prefix("Arg2:").ok_or_else(|| malformed("expected Arg2:"))?;
                relations.push(RelationAnnotation {
                    rel_id: id.to_string(),
                    kind,
                    source: source.to_string(),
                    target: target.to_string(),
                });
            }
            Some('A') => {
                let parts: Vec<&str> = body.split(' ').collect();
                let ["Stance", claim, value] = parts[..] else {
                    return Err(malformed("expected `Stance <id> <For|Against>`"));
                };
                let stance = match value {
                    "For" => Stance::For,
                    "Against" => Stance::Against,
                    _ => return Err(malformed("stance must be For or Against")),
                };
                stances.push(StanceAnnotation { attr_id: id.to_string(), claim: claim.to_string(), stance });
            }
            _ => return Err(malformed("unknown line prefix")),
        }
    }

    let mut warnings = Vec::new();
    let stances = dedupe_stances(stances, &mut warnings);
    let doc = finish(AnnotatedDocument { document, components, relations, stances })?;
    Ok((doc, warnings))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDocument {
    doc_id: String,
    text: String,
    #[serde(default)]
    components: Vec<JsonComponent>,
    #[serde(default)]
    relations: Vec<JsonRelation>,
    #[serde(default)]
    stances: Vec<JsonStance>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonComponent {
    id: String,
    kind: ComponentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    implicit: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRelation {
    id: String,
    kind: RelationKind,
    source: String,
    target: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonStance {
    id: String,
    claim: String,
    stance: Stance,
}

/// Parse the canonical JSON document schema.
pub fn parse_canonical_json(content: &str) -> Result<AnnotatedDocument, IngestError> {
    parse_canonical_json_with_warnings(content).map(|(doc, _)| doc)
}

pub fn parse_canonical_json_with_warnings(content: &str) -> Result<(AnnotatedDocument, Vec<Warning>), IngestError> {
    let de = &mut serde_json::Deserializer::from_str(content);
    let raw: JsonDocument = serde_path_to_error::deserialize(de).map_err(|e| IngestError::SchemaViolation {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    let document = TextDocument::new(raw.doc_id, &raw.text);
    let mut components = Vec::with_capacity(raw.components.len());
    for (i, c) in raw.components.into_iter().enumerate() {
        let schema = |field: &str, message: &str| IngestError::SchemaViolation {
            path: format!("components[{i}].{field}"),
            message: message.to_string(),
        };
        if c.implicit {
            if c.start.is_some() || c.end.is_some() {
                return Err(schema("start", "implicit components carry no offsets"));
            }
            let text = c.text.ok_or_else(|| schema("text", "implicit components need text"))?;
            components.push(ComponentAnnotation {
                comp_id: c.id,
                kind: c.kind,
                span: None,
                surface_text: text,
                paragraph: None,
            });
        } else {
            let start = c.start.ok_or_else(|| schema("start", "missing field"))?;
            let end = c.end.ok_or_else(|| schema("end", "missing field"))?;
            components.push(component(&document, c.id, c.kind, Span::new(start, end), c.text));
        }
    }
    let relations = raw
        .relations
        .into_iter()
        .map(|r| RelationAnnotation { rel_id: r.id, kind: r.kind, source: r.source, target: r.target })
        .collect();
    let stances = raw
        .stances
        .into_iter()
        .map(|s| StanceAnnotation { attr_id: s.id, claim: s.claim, stance: s.stance })
        .collect();
    let mut warnings = Vec::new();
    let stances = dedupe_stances(stances, &mut warnings);
    let doc = finish(AnnotatedDocument { document, components, relations, stances })?;
    Ok((doc, warnings))
}

/// Serialize to the canonical JSON schema.
pub fn to_canonical_json(doc: &AnnotatedDocument) -> String {
    let raw = JsonDocument {
        doc_id: doc.document.doc_id.clone(),
        text: doc.document.raw_text.clone(),
        components: doc
            .components
            .iter()
            .map(|c| JsonComponent {
                id: c.comp_id.clone(),
                kind: c.kind,
                start: c.span.map(|s| s.start),
                end: c.span.map(|s| s.end),
                implicit: c.is_implicit(),
                text: c.is_implicit().then(|| c.surface_text.clone()),
            })
            .collect(),
        relations: doc
            .relations
            .iter()
            .map(|r| JsonRelation {
                id: r.rel_id.clone(),
                kind: r.kind,
                source: r.source.clone(),
                target: r.target.clone(),
            })
            .collect(),
        stances: doc
            .stances
            .iter()
            .map(|s| JsonStance { id: s.attr_id.clone(), claim: s.claim.clone(), stance: s.stance })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("document serializes");
    out.push('\n');
    out
}

/// Check every document invariant; an empty list means the document is valid.
pub fn validate_document(doc: &AnnotatedDocument) -> Vec<Violation> {
    let mut out = Vec::new();
    let text = CharText::new(&doc.document.raw_text);
    let len = text.char_len();

    let paras = &doc.document.paragraph_spans;
    let paras_ok = paras.iter().all(|p| p.start <= p.end && p.end <= len)
        && paras.windows(2).all(|w| w[0].end <= w[1].start);
    if !paras_ok {
        out.push(Violation::BadParagraphSpans);
    }

    let mut kinds: BTreeMap<&str, ComponentKind> = BTreeMap::new();
    let mut seen: HashSet<&str> = HashSet::new();
    for c in &doc.components {
        if !seen.insert(&c.comp_id) {
            out.push(Violation::DuplicateId { id: c.comp_id.clone() });
        }
        kinds.entry(&c.comp_id).or_insert(c.kind);
        if let Some(span) = c.span {
            if text.slice(span) != Some(c.surface_text.as_str()) {
                out.push(Violation::SpanMismatch { comp_id: c.comp_id.clone() });
            }
        }
    }
    for r in &doc.relations {
        if !seen.insert(&r.rel_id) {
            out.push(Violation::DuplicateId { id: r.rel_id.clone() });
        }
        for end in [&r.source, &r.target] {
            if !kinds.contains_key(end.as_str()) {
                out.push(Violation::DanglingReference { referrer: r.rel_id.clone(), missing: end.clone() });
            }
        }
        if r.source == r.target {
            out.push(Violation::SelfRelation { rel_id: r.rel_id.clone() });
        }
    }
    for s in &doc.stances {
        if !seen.insert(&s.attr_id) {
            out.push(Violation::DuplicateId { id: s.attr_id.clone() });
        }
        match kinds.get(s.claim.as_str()) {
            None => out.push(Violation::DanglingReference { referrer: s.attr_id.clone(), missing: s.claim.clone() }),
            Some(ComponentKind::Claim) => {}
            Some(_) => out.push(Violation::StanceOnNonClaim { attr_id: s.attr_id.clone(), claim: s.claim.clone() }),
        }
    }
    out
}
