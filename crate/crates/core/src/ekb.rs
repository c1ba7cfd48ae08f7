//! The extended knowledge base: formulas, inference rules, the contrariness
//! and agreement functions, and the two preference pre-orders.
//!
//! Only premise formulas and inference rules belong to K. Claims and major
//! claims are formulas of the language but not premises, so the KB views
//! `C(KB)` and `Ag(KB)` keep just the pairs between members of K.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::annotation::{AnnotatedDocument, ComponentKind, RelationKind};
use crate::diagnostics::Warning;
use crate::ids::natural_cmp;
use crate::markers::{find_discourse_marker, sentence_start, Heuristic, ImMatch};
use crate::text::Span;

/// Identifier of a formula or an inference rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ElementId(pub String);

impl ElementId {
    pub fn new(s: impl Into<String>) -> Self {
        ElementId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ElementId {
    fn from(s: &str) -> Self {
        ElementId(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PremiseKind {
    Axiom,
    Ordinary,
    Assumption,
}

impl PremiseKind {
    pub fn letter(self) -> &'static str {
        match self {
            PremiseKind::Axiom => "n",
            PremiseKind::Ordinary => "p",
            PremiseKind::Assumption => "a",
        }
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        match s {
            "n" => Some(PremiseKind::Axiom),
            "p" => Some(PremiseKind::Ordinary),
            "a" => Some(PremiseKind::Assumption),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Formula {
    pub id: ElementId,
    pub text: String,
    pub implicit: bool,
    /// `None` for formulas outside K (claims, major claims).
    pub premise_kind: Option<PremiseKind>,
    pub marker: Option<String>,
    pub span: Option<Span>,
    pub component_kind: ComponentKind,
    pub paragraph: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RuleKind {
    Strict,
    Defeasible,
}

impl RuleKind {
    pub fn letter(self) -> &'static str {
        match self {
            RuleKind::Strict => "S",
            RuleKind::Defeasible => "D",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InferenceRule {
    pub id: ElementId,
    pub antecedents: Vec<ElementId>,
    pub consequent: ElementId,
    pub kind: RuleKind,
    pub im: Option<String>,
    /// Position of the inference marker in the text.
    pub anchor: Option<Span>,
    pub heuristic: Option<Heuristic>,
}

/// A binary relation over formula/rule ids. `(a, b)` reads "a is a contrary
/// of b" in a contrary set and "a agrees with b" in an agreement set.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PairSet {
    pub pairs: BTreeSet<(ElementId, ElementId)>,
}

pub type ContrarySet = PairSet;
pub type AgreementSet = PairSet;

impl PairSet {
    pub fn insert(&mut self, a: ElementId, b: ElementId) -> bool {
        self.pairs.insert((a, b))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// All `a` with `(a, target)` in the set.
    pub fn sources_of(&self, target: &ElementId) -> BTreeSet<ElementId> {
        self.pairs.iter().filter(|(_, t)| t == target).map(|(s, _)| s.clone()).collect()
    }

    fn restricted(&self, keep: impl Fn(&ElementId) -> bool) -> PairSet {
        PairSet { pairs: self.pairs.iter().filter(|(a, b)| keep(a) && keep(b)).cloned().collect() }
    }
}

/// Strict preference over defeasible rules; `(a, b)` means a < b. Stored
/// transitively closed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct RulePreference {
    pub lt: BTreeSet<(ElementId, ElementId)>,
}

impl RulePreference {
    /// Close `pairs` transitively; fails with a rule on a cycle.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (ElementId, ElementId)>) -> Result<Self, ElementId> {
        let lt = transitive_closure(pairs.into_iter().collect());
        if let Some((a, _)) = lt.iter().find(|(a, b)| a == b) {
            return Err(a.clone());
        }
        Ok(RulePreference { lt })
    }

    /// L1: rules strictly less preferred than `rule`.
    pub fn less_preferred(&self, rule: &ElementId) -> BTreeSet<ElementId> {
        self.lt.iter().filter(|(_, b)| b == rule).map(|(a, _)| a.clone()).collect()
    }

    /// L2: rules strictly more preferred than `rule`.
    pub fn more_preferred(&self, rule: &ElementId) -> BTreeSet<ElementId> {
        self.lt.iter().filter(|(a, _)| a == rule).map(|(_, b)| b.clone()).collect()
    }
}

fn transitive_closure(mut lt: BTreeSet<(ElementId, ElementId)>) -> BTreeSet<(ElementId, ElementId)> {
    loop {
        let mut added = Vec::new();
        for (a, b) in &lt {
            for (c, d) in &lt {
                if b == c && !lt.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            return lt;
        }
        lt.extend(added);
    }
}

/// Preference over non-axiom premises; stored and exported only.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PremisePreference {
    pub lt: BTreeSet<(ElementId, ElementId)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct KnowledgePartition {
    pub axioms: BTreeSet<ElementId>,
    pub ordinary: BTreeSet<ElementId>,
    pub assumptions: BTreeSet<ElementId>,
}

impl KnowledgePartition {
    pub fn kind_of(&self, id: &ElementId) -> Option<PremiseKind> {
        if self.axioms.contains(id) {
            Some(PremiseKind::Axiom)
        } else if self.ordinary.contains(id) {
            Some(PremiseKind::Ordinary)
        } else if self.assumptions.contains(id) {
            Some(PremiseKind::Assumption)
        } else {
            None
        }
    }

    pub fn contains(&self, id: &ElementId) -> bool {
        self.kind_of(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.axioms.len() + self.ordinary.len() + self.assumptions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Ekb {
    /// Every formula of the language, in document order.
    pub formulas: Vec<Formula>,
    pub rules: Vec<InferenceRule>,
    pub knowledge: KnowledgePartition,
    pub contraries: ContrarySet,
    pub agreements: AgreementSet,
    pub rule_pref: RulePreference,
    pub premise_pref: PremisePreference,
    /// Component id to formula/rule id, including rule-span components.
    pub component_elements: BTreeMap<String, ElementId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EkbError {
    #[error("preference line {line}: expected `id (> id)+`, got {content:?}")]
    MalformedPreferenceLine { line: usize, content: String },
    #[error("kind override line {line}: expected `component_id<TAB>n|p|a`, got {content:?}")]
    MalformedKindLine { line: usize, content: String },
    #[error("preference names unknown rule {0}")]
    UnknownPreferenceTarget(String),
    #[error("preference order is cyclic through {0}")]
    PreferenceCycle(String),
    #[error("strict rule {0} cannot take part in the rule preference")]
    StrictRuleInPreference(String),
    #[error("unknown rule {0}")]
    UnknownRule(String),
    #[error("kind override names unknown component {0}")]
    UnknownKindTarget(String),
    #[error("unknown formula or rule {0}")]
    UnknownId(String),
    #[error("inconsistent knowledge base: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<EkbViolation>),
}

/// Preference chains, e.g. `A5 > A2 > A10 > A15` (most preferred first).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PreferenceConfig {
    pub chains: Vec<Vec<String>>,
}

impl PreferenceConfig {
    pub fn parse(content: &str) -> Result<Self, EkbError> {
        let mut chains = Vec::new();
        for (i, line) in content.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let chain: Vec<String> = line.split('>').map(|s| s.trim().to_string()).collect();
            if chain.len() < 2 || chain.iter().any(|s| s.is_empty() || s.contains(char::is_whitespace)) {
                return Err(EkbError::MalformedPreferenceLine { line: i + 1, content: line.to_string() });
            }
            chains.push(chain);
        }
        Ok(PreferenceConfig { chains })
    }

    /// Rewrite every id through `f`, leaving unmapped ids unchanged.
    pub fn map_ids(&self, f: impl Fn(&str) -> Option<String>) -> Self {
        PreferenceConfig {
            chains: self
                .chains
                .iter()
                .map(|c| c.iter().map(|id| f(id).unwrap_or_else(|| id.clone())).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EkbConfig {
    pub preferences: PreferenceConfig,
    pub kind_overrides: BTreeMap<String, PremiseKind>,
    /// Rule ids to mark strict; everything else is defeasible.
    pub strict_rules: BTreeSet<String>,
}

/// Parse `component_id<TAB>n|p|a` lines.
pub fn parse_kind_overrides(content: &str) -> Result<BTreeMap<String, PremiseKind>, EkbError> {
    let mut out = BTreeMap::new();
    for (i, line) in content.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let bad = || EkbError::MalformedKindLine { line: i + 1, content: line.to_string() };
        let (id, kind) = line.split_once('\t').ok_or_else(bad)?;
        let kind = PremiseKind::from_letter(kind.trim()).ok_or_else(bad)?;
        out.insert(id.trim().to_string(), kind);
    }
    Ok(out)
}

impl Ekb {
    pub fn formula(&self, id: &ElementId) -> Option<&Formula> {
        self.formulas.iter().find(|f| &f.id == id)
    }

    pub fn rule(&self, id: &ElementId) -> Option<&InferenceRule> {
        self.rules.iter().find(|r| &r.id == id)
    }

    pub fn contains(&self, id: &ElementId) -> bool {
        self.formula(id).is_some() || self.rule(id).is_some()
    }

    /// Member of K: a premise formula or an inference rule premise.
    pub fn in_k(&self, id: &ElementId) -> bool {
        self.knowledge.contains(id) || self.rule(id).is_some()
    }

    /// Premise formulas (K_n ∪ K_p ∪ K_a) in document order.
    pub fn premises(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter().filter(|f| self.knowledge.contains(&f.id))
    }

    pub fn strict_rules(&self) -> impl Iterator<Item = &InferenceRule> {
        self.rules.iter().filter(|r| r.kind == RuleKind::Strict)
    }

    pub fn defeasible_rules(&self) -> impl Iterator<Item = &InferenceRule> {
        self.rules.iter().filter(|r| r.kind == RuleKind::Defeasible)
    }

    /// C(KB): contrary pairs between members of K.
    pub fn kb_contraries(&self) -> PairSet {
        self.contraries.restricted(|id| self.in_k(id))
    }

    /// Ag(KB): agreement pairs between members of K.
    pub fn kb_agreements(&self) -> PairSet {
        self.agreements.restricted(|id| self.in_k(id))
    }

    pub fn contraries_of(&self, id: &ElementId) -> Result<BTreeSet<ElementId>, EkbError> {
        if !self.contains(id) {
            return Err(EkbError::UnknownId(id.to_string()));
        }
        Ok(self.contraries.sources_of(id))
    }

    pub fn agreements_of(&self, id: &ElementId) -> Result<BTreeSet<ElementId>, EkbError> {
        if !self.contains(id) {
            return Err(EkbError::UnknownId(id.to_string()));
        }
        Ok(self.agreements.sources_of(id))
    }

    /// `(L1, L2)` for a defeasible rule; `None` for a strict one.
    pub fn rule_preference_sets(&self, rule_id: &ElementId) -> Result<Option<PreferenceSets>, EkbError> {
        let rule = self.rule(rule_id).ok_or_else(|| EkbError::UnknownRule(rule_id.to_string()))?;
        Ok(match rule.kind {
            RuleKind::Strict => None,
            RuleKind::Defeasible => {
                Some((self.rule_pref.less_preferred(rule_id), self.rule_pref.more_preferred(rule_id)))
            }
        })
    }

    /// Text of a formula, or `φ1, …, φn ⇒ φ` for a rule.
    pub fn element_text(&self, id: &ElementId) -> Option<String> {
        if let Some(f) = self.formula(id) {
            return Some(f.text.clone());
        }
        let rule = self.rule(id)?;
        let ants: Vec<String> = rule.antecedents.iter().filter_map(|a| self.element_text(a)).collect();
        let arrow = match rule.kind {
            RuleKind::Strict => "→",
            RuleKind::Defeasible => "⇒",
        };
        Some(format!("{} {arrow} {}", ants.join(", "), self.element_text(&rule.consequent)?))
    }
}

/// Ids sorted naturally, for rendering.
/// Less preferred and more preferred rules, in that order.
pub type PreferenceSets = (BTreeSet<ElementId>, BTreeSet<ElementId>);

pub fn sorted_ids(ids: &BTreeSet<ElementId>) -> Vec<String> {
    let mut v: Vec<String> = ids.iter().map(|i| i.0.clone()).collect();
    v.sort_by(|a, b| natural_cmp(a, b));
    v
}

/// Assemble the knowledge base from an annotated document and its detected
/// inference markers.
pub fn build_ekb(
    doc: &AnnotatedDocument,
    ims: &[ImMatch],
    config: &EkbConfig,
) -> Result<(Ekb, Vec<Warning>), EkbError> {
    let mut warnings = Vec::new();
    let mut ekb = Ekb::default();

    for id in config.kind_overrides.keys() {
        match doc.component(id) {
            Some(c) if c.kind != ComponentKind::InferenceRule => {}
            _ => return Err(EkbError::UnknownKindTarget(id.clone())),
        }
    }

    let statements: Vec<_> = doc.components.iter().filter(|c| c.kind != ComponentKind::InferenceRule).collect();
    for c in &statements {
        let id = ElementId(c.comp_id.clone());
        let premise_kind = config.kind_overrides.get(&c.comp_id).copied().or(match c.kind {
            ComponentKind::Premise => Some(PremiseKind::Ordinary),
            _ => None,
        });
        let marker = c.span.and_then(|span| {
            // The marker window opens at the sentence start or after the
            // previous component in the same sentence.
            let sentence = sentence_start(&doc.document, span.start);
            let from = statements
                .iter()
                .filter_map(|o| o.span)
                .filter(|o| o.end <= span.start && o.end >= sentence)
                .map(|o| o.end)
                .max()
                .unwrap_or(sentence);
            find_discourse_marker(&doc.document, Span::new(from, span.end))
        });
        match premise_kind {
            Some(PremiseKind::Axiom) => ekb.knowledge.axioms.insert(id.clone()),
            Some(PremiseKind::Ordinary) => ekb.knowledge.ordinary.insert(id.clone()),
            Some(PremiseKind::Assumption) => ekb.knowledge.assumptions.insert(id.clone()),
            None => false,
        };
        ekb.component_elements.insert(c.comp_id.clone(), id.clone());
        ekb.formulas.push(Formula {
            id,
            text: c.surface_text.clone(),
            implicit: c.is_implicit(),
            premise_kind,
            marker,
            span: c.span,
            component_kind: c.kind,
            paragraph: c.paragraph,
        });
    }
    ekb.formulas.sort_by_key(|f| (f.span.is_none(), f.span.map(|s| s.start)));

    let mut ims: Vec<&ImMatch> = ims.iter().collect();
    ims.sort_by_key(|m| (m.span.start, m.span.end));
    for m in ims {
        let inside = |region: Span| {
            let mut v: Vec<_> = statements
                .iter()
                .filter(|c| c.span.is_some_and(|s| region.contains(&s) && !s.overlaps(&m.span)))
                .copied()
                .collect();
            v.sort_by_key(|c| c.span.map(|s| s.start));
            v
        };
        let antecedents = inside(m.antecedent_span);
        let distance = |s: Span| {
            if s.start >= m.span.end {
                s.start - m.span.end
            } else {
                m.span.start.saturating_sub(s.end)
            }
        };
        let consequent = inside(m.consequent_span).into_iter().min_by_key(|c| c.span.map(distance));
        let Some(consequent) = consequent.filter(|_| !antecedents.is_empty()) else {
            log::warn!("marker {:?} at {:?} aligns with no component pair", m.surface, m.span);
            warnings.push(Warning::UnalignedIm { surface: m.surface.clone(), span: m.span });
            continue;
        };
        let ant_ids: Vec<&str> = antecedents.iter().map(|c| c.comp_id.as_str()).collect();
        let contradicts = doc.relations.iter().any(|r| {
            (r.source == consequent.comp_id && ant_ids.contains(&r.target.as_str()))
                || (r.kind == RelationKind::Attacks
                    && ant_ids.contains(&r.source.as_str())
                    && r.target == consequent.comp_id)
        });
        if contradicts {
            warnings.push(Warning::RuleContradictsAnnotation { surface: m.surface.clone(), span: m.span });
            continue;
        }
        let antecedent_ids: Vec<ElementId> = ant_ids.iter().map(|s| ElementId::from(*s)).collect();
        let consequent_id = ElementId(consequent.comp_id.clone());
        let duplicate = ekb.rules.iter().any(|r| {
            r.consequent == consequent_id
                && r.antecedents.iter().collect::<BTreeSet<_>>() == antecedent_ids.iter().collect::<BTreeSet<_>>()
        });
        if duplicate {
            warnings.push(Warning::DuplicateRule { surface: m.surface.clone(), span: m.span });
            continue;
        }
        let id = format!("R{}", ekb.rules.len() + 1);
        let kind = if config.strict_rules.contains(&id) { RuleKind::Strict } else { RuleKind::Defeasible };
        ekb.rules.push(InferenceRule {
            id: ElementId(id),
            antecedents: antecedent_ids,
            consequent: consequent_id,
            kind,
            im: Some(m.surface.clone()),
            anchor: Some(m.span),
            heuristic: Some(m.heuristic),
        });
    }
    for id in &config.strict_rules {
        if ekb.rule(&ElementId(id.clone())).is_none() {
            return Err(EkbError::UnknownRule(id.clone()));
        }
    }

    for c in doc.components.iter().filter(|c| c.kind == ComponentKind::InferenceRule) {
        let hits: Vec<&InferenceRule> = ekb
            .rules
            .iter()
            .filter(|r| match (c.span, r.anchor) {
                (Some(s), Some(a)) => s.start <= a.start && a.end <= s.end,
                _ => false,
            })
            .collect();
        if let [rule] = hits[..] {
            ekb.component_elements.insert(c.comp_id.clone(), rule.id.clone());
        } else {
            warnings.push(Warning::UnresolvedRuleSpan { comp_id: c.comp_id.clone() });
        }
    }

    for r in &doc.relations {
        let (Some(s), Some(t)) = (ekb.component_elements.get(&r.source), ekb.component_elements.get(&r.target)) else {
            warnings.push(Warning::DroppedRelation {
                rel_id: r.rel_id.clone(),
                reason: "endpoint is an unresolved rule span".into(),
            });
            continue;
        };
        if s == t {
            warnings.push(Warning::DroppedRelation { rel_id: r.rel_id.clone(), reason: "self relation".into() });
            continue;
        }
        let set = match r.kind {
            RelationKind::Supports => &mut ekb.agreements,
            RelationKind::Attacks => &mut ekb.contraries,
        };
        set.insert(s.clone(), t.clone());
    }

    let mut pairs = Vec::new();
    for chain in &config.preferences.chains {
        for id in chain {
            let rule = ekb
                .rule(&ElementId(id.clone()))
                .ok_or_else(|| EkbError::UnknownPreferenceTarget(id.clone()))?;
            if rule.kind == RuleKind::Strict {
                return Err(EkbError::StrictRuleInPreference(id.clone()));
            }
        }
        for w in chain.windows(2) {
            pairs.push((ElementId(w[1].clone()), ElementId(w[0].clone())));
        }
    }
    ekb.rule_pref = RulePreference::from_pairs(pairs).map_err(|r| EkbError::PreferenceCycle(r.0))?;

    let violations = validate_ekb(&ekb);
    if !violations.is_empty() {
        return Err(EkbError::Invalid(violations));
    }
    Ok((ekb, warnings))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation")]
pub enum EkbViolation {
    PartitionOverlap { id: String },
    PartitionMismatch { id: String },
    DuplicateId { id: String },
    RuleKindOverlap { id: String },
    EmptyAntecedents { rule: String },
    SelfReferentialRule { rule: String },
    DanglingReference { owner: String, missing: String },
    StrictRuleInPreference { rule: String },
    PreferenceCycle { rule: String },
    ReflexivePair { id: String },
    AxiomAttacked { id: String },
    AxiomInPremisePreference { id: String },
}

impl fmt::Display for EkbViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EkbViolation::PartitionOverlap { id } => write!(f, "{id} lies in more than one of K_n, K_p, K_a"),
            EkbViolation::PartitionMismatch { id } => write!(f, "{id}: premise kind disagrees with the partition"),
            EkbViolation::DuplicateId { id } => write!(f, "duplicate id {id}"),
            EkbViolation::RuleKindOverlap { id } => write!(f, "rule {id} is both strict and defeasible"),
            EkbViolation::EmptyAntecedents { rule } => write!(f, "rule {rule} has no antecedents"),
            EkbViolation::SelfReferentialRule { rule } => write!(f, "rule {rule} concludes one of its antecedents"),
            EkbViolation::DanglingReference { owner, missing } => write!(f, "{owner} references unknown {missing}"),
            EkbViolation::StrictRuleInPreference { rule } => write!(f, "strict rule {rule} in the rule preference"),
            EkbViolation::PreferenceCycle { rule } => write!(f, "rule preference is cyclic through {rule}"),
            EkbViolation::ReflexivePair { id } => write!(f, "{id} is related to itself"),
            EkbViolation::AxiomAttacked { id } => write!(f, "axiom {id} has a contrary"),
            EkbViolation::AxiomInPremisePreference { id } => write!(f, "axiom {id} in the premise preference"),
        }
    }
}

/// Check every knowledge-base invariant; an empty list means consistent.
pub fn validate_ekb(ekb: &Ekb) -> Vec<EkbViolation> {
    let mut out = Vec::new();
    let k = &ekb.knowledge;

    let mut membership: HashMap<&ElementId, usize> = HashMap::new();
    for id in k.axioms.iter().chain(&k.ordinary).chain(&k.assumptions) {
        *membership.entry(id).or_default() += 1;
    }
    let mut overlapping: Vec<&ElementId> = membership.iter().filter(|(_, n)| **n > 1).map(|(id, _)| *id).collect();
    overlapping.sort();
    out.extend(overlapping.into_iter().map(|id| EkbViolation::PartitionOverlap { id: id.to_string() }));
    for f in &ekb.formulas {
        let member = membership.contains_key(&f.id);
        if member != f.premise_kind.is_some() || (member && membership[&f.id] == 1 && k.kind_of(&f.id) != f.premise_kind) {
            out.push(EkbViolation::PartitionMismatch { id: f.id.to_string() });
        }
    }
    let mut partitioned: Vec<&&ElementId> = membership.keys().collect();
    partitioned.sort();
    for id in partitioned {
        if ekb.formula(id).is_none() {
            out.push(EkbViolation::DanglingReference { owner: "K".into(), missing: id.to_string() });
        }
    }

    let mut seen: HashMap<&ElementId, Option<RuleKind>> = HashMap::new();
    for f in &ekb.formulas {
        if seen.insert(&f.id, None).is_some() {
            out.push(EkbViolation::DuplicateId { id: f.id.to_string() });
        }
    }
    for r in &ekb.rules {
        match seen.insert(&r.id, Some(r.kind)) {
            Some(Some(kind)) if kind != r.kind => out.push(EkbViolation::RuleKindOverlap { id: r.id.to_string() }),
            Some(_) => out.push(EkbViolation::DuplicateId { id: r.id.to_string() }),
            None => {}
        }
        if r.antecedents.is_empty() {
            out.push(EkbViolation::EmptyAntecedents { rule: r.id.to_string() });
        }
        if r.antecedents.contains(&r.consequent) {
            out.push(EkbViolation::SelfReferentialRule { rule: r.id.to_string() });
        }
        for id in r.antecedents.iter().chain(std::iter::once(&r.consequent)) {
            if ekb.formula(id).is_none() && ekb.rule(id).is_none() {
                out.push(EkbViolation::DanglingReference { owner: r.id.to_string(), missing: id.to_string() });
            }
        }
    }

    let mut pref_rules = BTreeSet::new();
    for (a, b) in &ekb.rule_pref.lt {
        pref_rules.insert(a);
        pref_rules.insert(b);
    }
    for id in pref_rules {
        match ekb.rule(id) {
            None => out.push(EkbViolation::DanglingReference { owner: "rule preference".into(), missing: id.to_string() }),
            Some(r) if r.kind == RuleKind::Strict => {
                out.push(EkbViolation::StrictRuleInPreference { rule: id.to_string() })
            }
            Some(_) => {}
        }
    }
    if let Some((a, _)) = transitive_closure(ekb.rule_pref.lt.clone()).iter().find(|(a, b)| a == b) {
        out.push(EkbViolation::PreferenceCycle { rule: a.to_string() });
    }

    for (name, set) in [("contraries", &ekb.contraries), ("agreements", &ekb.agreements)] {
        for (a, b) in &set.pairs {
            if a == b {
                out.push(EkbViolation::ReflexivePair { id: a.to_string() });
            }
            for id in [a, b] {
                if !ekb.contains(id) {
                    out.push(EkbViolation::DanglingReference { owner: name.into(), missing: id.to_string() });
                }
            }
        }
    }
    for (_, target) in &ekb.contraries.pairs {
        if k.axioms.contains(target) {
            out.push(EkbViolation::AxiomAttacked { id: target.to_string() });
        }
    }
    for (a, b) in &ekb.premise_pref.lt {
        for id in [a, b] {
            if k.axioms.contains(id) {
                out.push(EkbViolation::AxiomInPremisePreference { id: id.to_string() });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::parse_canonical_json;
    use crate::markers::{detect_ims, MarkerLexicon};

    fn id(s: &str) -> ElementId {
        ElementId::from(s)
    }

    fn ekb_with_rules(n: usize) -> Ekb {
        let mut ekb = Ekb::default();
        for i in 0..=n {
            ekb.formulas.push(Formula {
                id: id(&format!("F{i}")),
                text: format!("f{i}"),
                implicit: false,
                premise_kind: Some(PremiseKind::Ordinary),
                marker: None,
                span: None,
                component_kind: ComponentKind::Premise,
                paragraph: None,
            });
            ekb.knowledge.ordinary.insert(id(&format!("F{i}")));
        }
        for i in 1..=n {
            ekb.rules.push(InferenceRule {
                id: id(&format!("R{i}")),
                antecedents: vec![id(&format!("F{}", i - 1))],
                consequent: id(&format!("F{i}")),
                kind: RuleKind::Defeasible,
                im: Some("so".into()),
                anchor: None,
                heuristic: None,
            });
        }
        ekb
    }

    #[test]
    fn empty_document_gives_empty_ekb() {
        let doc = parse_canonical_json(r#"{"doc_id":"e","text":""}"#).unwrap();
        let (ekb, warnings) = build_ekb(&doc, &[], &EkbConfig::default()).unwrap();
        assert_eq!(ekb, Ekb::default());
        assert!(warnings.is_empty());
    }

    #[test]
    fn preference_chain_closure() {
        let mut ekb = ekb_with_rules(4);
        ekb.rule_pref = RulePreference::from_pairs([(id("R2"), id("R1")), (id("R3"), id("R2")), (id("R4"), id("R3"))]).unwrap();
        let (l1, l2) = ekb.rule_preference_sets(&id("R2")).unwrap().unwrap();
        assert_eq!(l1, [id("R3"), id("R4")].into());
        assert_eq!(l2, [id("R1")].into());
        let (l1, l2) = ekb.rule_preference_sets(&id("R1")).unwrap().unwrap();
        assert_eq!(l1.len(), 3);
        assert!(l2.is_empty());
        assert_eq!(ekb.rule_preference_sets(&id("R9")), Err(EkbError::UnknownRule("R9".into())));
    }

    #[test]
    fn strict_rule_has_no_preference_sets() {
        let mut ekb = ekb_with_rules(1);
        ekb.rules[0].kind = RuleKind::Strict;
        assert_eq!(ekb.rule_preference_sets(&id("R1")).unwrap(), None);
    }

    #[test]
    fn cycles_are_rejected() {
        assert!(RulePreference::from_pairs([(id("R1"), id("R2")), (id("R2"), id("R1"))]).is_err());
    }

    #[test]
    fn preference_parsing() {
        let p = PreferenceConfig::parse("# order\nA5 > A2 > A10 > A15\n").unwrap();
        assert_eq!(p.chains, vec![vec!["A5", "A2", "A10", "A15"]]);
        assert!(matches!(PreferenceConfig::parse("A5\n"), Err(EkbError::MalformedPreferenceLine { line: 1, .. })));
        assert!(matches!(PreferenceConfig::parse("A5 > > A2\n"), Err(EkbError::MalformedPreferenceLine { .. })));
    }

    #[test]
    fn kind_override_parsing() {
        let k = parse_kind_overrides("T1\tn\nT2\ta\n").unwrap();
        assert_eq!(k["T1"], PremiseKind::Axiom);
        assert!(parse_kind_overrides("T1\tx\n").is_err());
    }

    #[test]
    fn partition_overlap_is_reported() {
        let mut ekb = ekb_with_rules(0);
        ekb.knowledge.axioms.insert(id("F0"));
        ekb.knowledge.assumptions.insert(id("F0"));
        assert!(validate_ekb(&ekb).contains(&EkbViolation::PartitionOverlap { id: "F0".into() }));
    }

    #[test]
    fn strict_rule_in_preference_is_reported() {
        let mut ekb = ekb_with_rules(2);
        ekb.rules[0].kind = RuleKind::Strict;
        ekb.rule_pref = RulePreference::from_pairs([(id("R2"), id("R1"))]).unwrap();
        assert_eq!(validate_ekb(&ekb), vec![EkbViolation::StrictRuleInPreference { rule: "R1".into() }]);
    }

    #[test]
    fn self_referential_rule_is_reported() {
        let mut ekb = ekb_with_rules(1);
        ekb.rules[0].consequent = id("F0");
        assert!(validate_ekb(&ekb).contains(&EkbViolation::SelfReferentialRule { rule: "R1".into() }));
    }

    #[test]
    fn symmetric_contraries_and_agreements() {
        let mut ekb = ekb_with_rules(1);
        ekb.contraries.insert(id("F0"), id("F1"));
        ekb.contraries.insert(id("F1"), id("F0"));
        ekb.agreements.insert(id("F0"), id("F1"));
        ekb.agreements.insert(id("F1"), id("F0"));
        assert_eq!(ekb.contraries_of(&id("F0")).unwrap(), [id("F1")].into());
        assert_eq!(ekb.contraries_of(&id("F1")).unwrap(), [id("F0")].into());
        assert!(!ekb.agreements_of(&id("F0")).unwrap().is_empty());
        assert!(!ekb.agreements_of(&id("F1")).unwrap().is_empty());
        assert!(ekb.agreements_of(&id("R1")).unwrap().is_empty());
        assert_eq!(ekb.contraries_of(&id("X")), Err(EkbError::UnknownId("X".into())));
        assert!(validate_ekb(&ekb).is_empty());
    }

    fn pollock() -> AnnotatedDocument {
        parse_canonical_json(include_str!("../fixtures/pollock.json")).unwrap()
    }

    #[test]
    fn pollock_has_one_rule_and_a_contrary_into_it() {
        let doc = pollock();
        let ims = detect_ims(&doc.document, &MarkerLexicon::builtin());
        let (ekb, _) = build_ekb(&doc, &ims, &EkbConfig::default()).unwrap();
        assert_eq!(ekb.rules.len(), 1);
        let rule = &ekb.rules[0];
        assert_eq!(rule.kind, RuleKind::Defeasible);
        assert_eq!(ekb.element_text(&rule.id).unwrap(), "The object appears red ⇒ the object is red");
        assert_eq!(ekb.contraries_of(&rule.id).unwrap(), [id("T3")].into());
        assert_eq!(ekb.kb_contraries().len(), 1);
    }

    #[test]
    fn unknown_preference_target_and_strict_conflict() {
        let doc = pollock();
        let ims = detect_ims(&doc.document, &MarkerLexicon::builtin());
        let mut config = EkbConfig { preferences: PreferenceConfig::parse("R1 > R7").unwrap(), ..Default::default() };
        assert_eq!(build_ekb(&doc, &ims, &config).unwrap_err(), EkbError::UnknownPreferenceTarget("R7".into()));
        config.preferences = PreferenceConfig::parse("R1 > R1").unwrap();
        assert_eq!(build_ekb(&doc, &ims, &config).unwrap_err(), EkbError::PreferenceCycle("R1".into()));
        config.preferences = PreferenceConfig::default();
        config.strict_rules.insert("R1".into());
        let (ekb, _) = build_ekb(&doc, &ims, &config).unwrap();
        assert_eq!(ekb.rules[0].kind, RuleKind::Strict);
        assert_eq!(ekb.element_text(&id("R1")).unwrap(), "The object appears red → the object is red");
    }

    #[test]
    fn rules_against_annotated_direction_are_dropped() {
        let json = r#"{"doc_id":"x","text":"Taxes rose. Therefore, prices climbed.",
            "components":[{"id":"T1","kind":"Premise","start":0,"end":10},{"id":"T2","kind":"Premise","start":23,"end":37}],
            "relations":[{"id":"R1","kind":"supports","source":"T2","target":"T1"}]}"#;
        let doc = parse_canonical_json(json).unwrap();
        let ims = detect_ims(&doc.document, &MarkerLexicon::builtin());
        assert_eq!(ims.len(), 1);
        let (ekb, warnings) = build_ekb(&doc, &ims, &EkbConfig::default()).unwrap();
        assert!(ekb.rules.is_empty());
        assert!(matches!(warnings[..], [Warning::RuleContradictsAnnotation { .. }]));
    }

    #[test]
    fn multiple_antecedents_make_one_rule() {
        let json = r#"{"doc_id":"x","text":"Taxes rose and wages fell. Therefore, prices climbed.",
            "components":[{"id":"T1","kind":"Premise","start":0,"end":10},{"id":"T2","kind":"Premise","start":15,"end":25},
                          {"id":"T3","kind":"Claim","start":38,"end":52}]}"#;
        let doc = parse_canonical_json(json).unwrap();
        let ims = detect_ims(&doc.document, &MarkerLexicon::builtin());
        let (ekb, _) = build_ekb(&doc, &ims, &EkbConfig::default()).unwrap();
        assert_eq!(ekb.rules.len(), 1);
        assert_eq!(ekb.rules[0].antecedents, vec![id("T1"), id("T2")]);
        assert_eq!(ekb.rules[0].consequent, id("T3"));
        assert_eq!(ekb.formula(&id("T3")).unwrap().premise_kind, None);
    }
}
