//! The argument knowledge graph: argument nodes with attribute boxes and
//! support, typed attack and modus-ponens edges.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::annotation::{AnnotatedDocument, ComponentKind, Stance, StanceAnnotation};
use crate::arguments::{rule_argument_ids, Argument, ArgumentKind, ArgumentSet, Content, MpApplication};
use crate::attributes::{AttrValue, AttributeBox};
use crate::diagnostics::Warning;
use crate::ekb::{Ekb, ElementId, PremiseKind, RuleKind};
use crate::ids::natural_cmp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AkgNodeKind {
    Premise,
    ImplicitPremise,
    InferenceRulePremise,
    Conclusion,
    ImplicitConclusion,
}

impl AkgNodeKind {
    pub fn is_implicit(self) -> bool {
        matches!(self, AkgNodeKind::ImplicitPremise | AkgNodeKind::ImplicitConclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AkgNode {
    pub arg_id: String,
    pub kind: AkgNodeKind,
    pub text: String,
    pub attributes: AttributeBox,
    /// Premise kind of the underlying formula, for attack classification.
    pub premise_kind: Option<PremiseKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeKind {
    Support,
    Attack,
    ModusPonens,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AttackType {
    /// Rebuttal: the attack targets a conclusion.
    Reb,
    /// Undermining: the attack targets a non-axiom premise.
    UM,
    /// Undercut: the attack targets an inference rule.
    UC,
}

impl fmt::Display for AttackType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackType::Reb => "Reb",
            AttackType::UM => "UM",
            AttackType::UC => "UC",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AkgEdge {
    pub source: String,
    pub target: String,
    pub kind: EdgeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attack_type: Option<AttackType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mp_group: Option<usize>,
    /// Set on attacks into assumptions, which succeed regardless of preference.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub contrary_undermine: bool,
}

impl AkgEdge {
    pub fn support(source: &str, target: &str) -> Self {
        AkgEdge {
            source: source.into(),
            target: target.into(),
            kind: EdgeKind::Support,
            attack_type: None,
            mp_group: None,
            contrary_undermine: false,
        }
    }

    pub fn attack(source: &str, target: &str, attack_type: AttackType) -> Self {
        AkgEdge { kind: EdgeKind::Attack, attack_type: Some(attack_type), ..AkgEdge::support(source, target) }
    }

    pub fn modus_ponens(source: &str, target: &str, group: usize) -> Self {
        AkgEdge { kind: EdgeKind::ModusPonens, mp_group: Some(group), ..AkgEdge::support(source, target) }
    }
}

fn edge_cmp(a: &AkgEdge, b: &AkgEdge) -> Ordering {
    natural_cmp(&a.source, &b.source)
        .then_with(|| natural_cmp(&a.target, &b.target))
        .then_with(|| a.kind.cmp(&b.kind))
        .then_with(|| a.mp_group.cmp(&b.mp_group))
        .then_with(|| a.attack_type.cmp(&b.attack_type))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Akg {
    pub doc_id: String,
    pub nodes: Vec<AkgNode>,
    pub edges: Vec<AkgEdge>,
    pub mp_applications: Vec<MpApplication>,
    /// Support edges removed because modus-ponens edges carry the same inference.
    pub prune_log: Vec<AkgEdge>,
}

impl Akg {
    pub fn node(&self, arg_id: &str) -> Option<&AkgNode> {
        self.nodes.iter().find(|n| n.arg_id == arg_id)
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &AkgEdge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    pub fn has_edge(&self, source: &str, target: &str, kind: EdgeKind) -> bool {
        self.edges.iter().any(|e| e.source == source && e.target == target && e.kind == kind)
    }

    fn sort_edges(&mut self) {
        self.edges.sort_by(edge_cmp);
        self.edges.dedup();
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AkgError {
    #[error("contrary targets axiom {0}; axioms cannot be attacked")]
    AxiomAttacked(String),
    #[error("stance refers to {0}, which has no argument")]
    UnknownClaim(String),
    #[error("no argument carries {0}")]
    UnmappedElement(String),
}

/// The attack type follows from the kind of node attacked.
pub fn classify_attack(target: &AkgNode) -> Result<AttackType, AkgError> {
    if target.premise_kind == Some(PremiseKind::Axiom) && !matches!(target.kind, AkgNodeKind::InferenceRulePremise) {
        return Err(AkgError::AxiomAttacked(target.arg_id.clone()));
    }
    Ok(match target.kind {
        AkgNodeKind::InferenceRulePremise => AttackType::UC,
        AkgNodeKind::Conclusion | AkgNodeKind::ImplicitConclusion => AttackType::Reb,
        AkgNodeKind::Premise | AkgNodeKind::ImplicitPremise => AttackType::UM,
    })
}

fn node_for(ekb: &Ekb, aset: &ArgumentSet, doc: &AnnotatedDocument, arg: &Argument) -> AkgNode {
    let formula = match &arg.content {
        Content::Formula(id) => ekb.formula(id),
        Content::Merged(ids) => ids.first().and_then(|id| ekb.formula(id)),
        Content::Rule(_) => None,
    };
    let premise_kind = formula.and_then(|f| f.premise_kind);
    let marker = || {
        let marker = match &arg.content {
            Content::Merged(ids) => ids.iter().filter_map(|id| ekb.formula(id)).find_map(|f| f.marker.clone()),
            _ => formula.and_then(|f| f.marker.clone()),
        };
        marker.map_or(AttrValue::None, AttrValue::Marker)
    };
    let id = AttrValue::Id(arg.arg_id.clone());
    let (kind, values) = match arg.kind {
        ArgumentKind::P => (
            if arg.implicit { AkgNodeKind::ImplicitPremise } else { AkgNodeKind::Premise },
            vec![id, marker(), premise_kind.map_or(AttrValue::None, |k| AttrValue::Symbol(k.letter().into()))],
        ),
        ArgumentKind::C => {
            let mut values = vec![id, marker()];
            let tag = arg
                .content
                .elements()
                .iter()
                .filter_map(|e| doc.component(e.as_str()))
                .map(|c| c.kind)
                .find(|k| matches!(k, ComponentKind::Claim | ComponentKind::MajorClaim));
            if let Some(tag) = tag {
                values.push(AttrValue::Symbol(tag.as_str().into()));
            }
            (if arg.implicit { AkgNodeKind::ImplicitConclusion } else { AkgNodeKind::Conclusion }, values)
        }
        ArgumentKind::IRP => {
            let rule = match &arg.content {
                Content::Rule(r) => ekb.rule(r),
                _ => None,
            }
            .expect("IRP argument carries a rule");
            let rule_args = rule_argument_ids(aset);
            let as_args = |ids: BTreeSet<ElementId>| {
                let mut v: Vec<String> = ids.iter().filter_map(|r| rule_args.get(r).cloned()).collect();
                v.sort_by(|a, b| natural_cmp(a, b));
                AttrValue::Set(v)
            };
            let (l1, l2) = match rule.kind {
                RuleKind::Strict => (AttrValue::None, AttrValue::None),
                RuleKind::Defeasible => (
                    as_args(ekb.rule_pref.less_preferred(&rule.id)),
                    as_args(ekb.rule_pref.more_preferred(&rule.id)),
                ),
            };
            (
                AkgNodeKind::InferenceRulePremise,
                vec![
                    id,
                    AttrValue::Symbol(rule.kind.letter().into()),
                    rule.im.clone().map_or(AttrValue::None, AttrValue::Marker),
                    l1,
                    l2,
                ],
            )
        }
    };
    AkgNode { arg_id: arg.arg_id.clone(), kind, text: arg.text.clone(), attributes: AttributeBox(values), premise_kind }
}

/// Stances become edges from the claim to every major-claim argument:
/// support for `For`, a typed attack for `Against`.
pub fn convert_stances(
    stances: &[StanceAnnotation],
    major_claims: &[&AkgNode],
    claim_arg: impl Fn(&str) -> Option<String>,
) -> Result<Vec<AkgEdge>, AkgError> {
    let mut out = Vec::new();
    for s in stances {
        let source = claim_arg(&s.claim).ok_or_else(|| AkgError::UnknownClaim(s.claim.clone()))?;
        for mc in major_claims {
            if mc.arg_id == source {
                continue;
            }
            out.push(match s.stance {
                Stance::For => AkgEdge::support(&source, &mc.arg_id),
                Stance::Against => AkgEdge::attack(&source, &mc.arg_id, classify_attack(mc)?),
            });
        }
    }
    Ok(out)
}

/// Drop every support edge whose source already feeds a modus-ponens
/// application into the same target.
pub fn prune_redundant_support(akg: &mut Akg) -> Vec<Warning> {
    let covered: BTreeSet<(&str, &str)> = akg
        .mp_applications
        .iter()
        .flat_map(|m| {
            m.antecedent_args
                .iter()
                .chain(std::iter::once(&m.rule_arg))
                .map(move |s| (s.as_str(), m.result_arg.as_str()))
        })
        .collect();
    let (pruned, kept): (Vec<AkgEdge>, Vec<AkgEdge>) = akg.edges.iter().cloned().partition(|e| {
        e.kind == EdgeKind::Support && covered.contains(&(e.source.as_str(), e.target.as_str()))
    });
    akg.edges = kept;
    let warnings =
        pruned.iter().map(|e| Warning::PrunedSupport { source: e.source.clone(), target: e.target.clone() }).collect();
    akg.prune_log.extend(pruned);
    warnings
}

/// Build the AKG without pruning; `build_akg` prunes as its last step.
pub fn build_akg_unpruned(ekb: &Ekb, aset: &ArgumentSet, doc: &AnnotatedDocument) -> Result<Akg, AkgError> {
    let nodes: Vec<AkgNode> = aset.arguments.iter().map(|a| node_for(ekb, aset, doc, a)).collect();
    let mut akg = Akg {
        doc_id: doc.doc_id().to_string(),
        nodes,
        edges: vec![],
        mp_applications: aset.mp_applications.clone(),
        prune_log: vec![],
    };
    let arg_of = |id: &ElementId| {
        aset.argument_for(id).map(|a| a.arg_id.clone()).ok_or_else(|| AkgError::UnmappedElement(id.to_string()))
    };

    for (a, b) in &ekb.agreements.pairs {
        let (s, t) = (arg_of(a)?, arg_of(b)?);
        if s != t {
            akg.edges.push(AkgEdge::support(&s, &t));
        }
    }
    for (a, b) in &ekb.contraries.pairs {
        let (s, t) = (arg_of(a)?, arg_of(b)?);
        let target = akg.node(&t).expect("node per argument");
        if ekb.knowledge.axioms.contains(b) {
            return Err(AkgError::AxiomAttacked(b.to_string()));
        }
        let mut edge = AkgEdge::attack(&s, &t, classify_attack(target)?);
        edge.contrary_undermine = ekb.knowledge.assumptions.contains(b);
        akg.edges.push(edge);
    }

    let major: Vec<&AkgNode> = aset
        .arguments
        .iter()
        .filter(|a| {
            a.content.elements().iter().any(|e| doc.component(e.as_str()).is_some_and(|c| c.kind == ComponentKind::MajorClaim))
        })
        .filter_map(|a| akg.node(&a.arg_id))
        .collect();
    let stance_edges = convert_stances(&doc.stances, &major, |claim| {
        ekb.component_elements.get(claim).and_then(|e| aset.argument_for(e)).map(|a| a.arg_id.clone())
    })?;
    akg.edges.extend(stance_edges);

    for (group, m) in aset.mp_applications.iter().enumerate() {
        akg.edges.push(AkgEdge::modus_ponens(&m.rule_arg, &m.result_arg, group));
        for a in &m.antecedent_args {
            akg.edges.push(AkgEdge::modus_ponens(a, &m.result_arg, group));
        }
    }
    akg.sort_edges();
    Ok(akg)
}

pub fn build_akg(ekb: &Ekb, aset: &ArgumentSet, doc: &AnnotatedDocument) -> Result<(Akg, Vec<Warning>), AkgError> {
    let mut akg = build_akg_unpruned(ekb, aset, doc)?;
    let warnings = prune_redundant_support(&mut akg);
    Ok((akg, warnings))
}
