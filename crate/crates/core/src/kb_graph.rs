//! The attributed knowledge-base graph: one node per member of K, support
//! edges from `Ag(KB)` and attack edges from `C(KB)`.

use serde::Serialize;

use crate::attributes::{AttrValue, AttributeBox};
use crate::ekb::{sorted_ids, Ekb, ElementId, Formula, InferenceRule, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum KbNodeKind {
    Premise,
    ImplicitPremise,
    InferenceRulePremise,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KbNode {
    pub id: ElementId,
    pub kind: KbNodeKind,
    pub text: String,
    pub attributes: AttributeBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum KbEdgeKind {
    Support,
    Attack,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct KbEdge {
    pub source: ElementId,
    pub target: ElementId,
    pub kind: KbEdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct KbGraph {
    pub doc_id: String,
    pub nodes: Vec<KbNode>,
    pub edges: Vec<KbEdge>,
}

impl KbGraph {
    pub fn node(&self, id: &ElementId) -> Option<&KbNode> {
        self.nodes.iter().find(|n| &n.id == id)
    }

    pub fn edges_of_kind(&self, kind: KbEdgeKind) -> impl Iterator<Item = &KbEdge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }
}

/// `[marker|N, n|p|a]`
pub fn premise_attribute_box(f: &Formula) -> AttributeBox {
    AttributeBox(vec![
        f.marker.clone().map_or(AttrValue::None, AttrValue::Marker),
        f.premise_kind.map_or(AttrValue::None, |k| AttrValue::Symbol(k.letter().into())),
    ])
}

/// `[id, S|D, IM|N, L1|N, L2|N]`; preference sets are N for strict rules.
pub fn rule_attribute_box(ekb: &Ekb, rule: &InferenceRule) -> AttributeBox {
    let (l1, l2) = match rule.kind {
        RuleKind::Strict => (AttrValue::None, AttrValue::None),
        RuleKind::Defeasible => (
            AttrValue::Set(sorted_ids(&ekb.rule_pref.less_preferred(&rule.id))),
            AttrValue::Set(sorted_ids(&ekb.rule_pref.more_preferred(&rule.id))),
        ),
    };
    AttributeBox(vec![
        AttrValue::Id(rule.id.to_string()),
        AttrValue::Symbol(rule.kind.letter().into()),
        rule.im.clone().map_or(AttrValue::None, AttrValue::Marker),
        l1,
        l2,
    ])
}

pub fn build_kb_graph(ekb: &Ekb, doc_id: &str) -> KbGraph {
    let mut nodes: Vec<KbNode> = ekb
        .premises()
        .map(|f| KbNode {
            id: f.id.clone(),
            kind: if f.implicit { KbNodeKind::ImplicitPremise } else { KbNodeKind::Premise },
            text: f.text.clone(),
            attributes: premise_attribute_box(f),
        })
        .collect();
    nodes.extend(ekb.rules.iter().map(|r| KbNode {
        id: r.id.clone(),
        kind: KbNodeKind::InferenceRulePremise,
        text: ekb.element_text(&r.id).unwrap_or_default(),
        attributes: rule_attribute_box(ekb, r),
    }));

    let mut edges: Vec<KbEdge> = ekb
        .kb_agreements()
        .pairs
        .into_iter()
        .map(|(source, target)| KbEdge { source, target, kind: KbEdgeKind::Support })
        .chain(
            ekb.kb_contraries()
                .pairs
                .into_iter()
                .map(|(source, target)| KbEdge { source, target, kind: KbEdgeKind::Attack }),
        )
        .collect();
    edges.sort();
    KbGraph { doc_id: doc_id.to_string(), nodes, edges }
}
