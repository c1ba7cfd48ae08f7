mod common;

use argkg_core::akg::build_akg_unpruned;
use argkg_core::pipeline::{process_document, PipelineError, PipelineOptions};
use argkg_core::{
    parse_canonical_json, AkgNodeKind, ArgumentKind, AttackType, EdgeKind, EkbError, PreferenceConfig, PremiseKind,
};

#[test]
fn essay_node_kinds_and_boxes() {
    let out = common::essay();
    let akg = &out.akg;
    assert_eq!(akg.nodes.len(), 18);
    let kind = |id: &str| akg.node(id).unwrap().kind;
    assert_eq!(kind("A2"), AkgNodeKind::InferenceRulePremise);
    assert_eq!(kind("A3"), AkgNodeKind::Premise);
    assert_eq!(kind("A17"), AkgNodeKind::Conclusion);
    let boxed = |id: &str| akg.node(id).unwrap().attributes.to_string();
    assert_eq!(boxed("A16"), "{A16, \"however\", p}");
    assert_eq!(boxed("A5"), "{A5, D, \"thus\", {A2, A10, A15}, φ}");
    assert_eq!(boxed("A13"), "{A13, N, Claim}");
    assert_eq!(boxed("A18"), "{A18, \"to sum up\", MajorClaim}");
}

#[test]
fn essay_edge_discipline() {
    let out = common::essay();
    for e in &out.akg.edges {
        assert_eq!(e.attack_type.is_some(), e.kind == EdgeKind::Attack);
        assert_eq!(e.mp_group.is_some(), e.kind == EdgeKind::ModusPonens);
    }
    // No support runs parallel to a modus-ponens edge into the same target.
    for s in out.akg.edges_of_kind(EdgeKind::Support) {
        assert!(!out.akg.has_edge(&s.source, &s.target, EdgeKind::ModusPonens));
    }
    let unpruned = build_akg_unpruned(&out.ekb, &out.arguments, &out.doc).unwrap();
    assert_eq!(unpruned.edges.len(), out.akg.edges.len() + out.akg.prune_log.len());
    assert!(out.akg.edges_of_kind(EdgeKind::Attack).all(|e| e.attack_type == Some(AttackType::Reb)));
}

#[test]
fn pollock_undercut() {
    let out = common::pollock();
    assert_eq!(out.ekb.rules.len(), 1);
    let attack = out.akg.edges_of_kind(EdgeKind::Attack).next().unwrap();
    assert_eq!(attack.attack_type, Some(AttackType::UC));
    let target = out.arguments.get(&attack.target).unwrap();
    assert_eq!(target.kind, ArgumentKind::IRP);
    assert_eq!(out.af.atts.len(), 1);
}

#[test]
fn node_only_graph_without_relations() {
    let doc = parse_canonical_json(
        r#"{"doc_id":"plain","text":"Cars pollute. Bikes do not.",
        "components":[{"id":"T1","kind":"Premise","start":0,"end":12},{"id":"T2","kind":"Claim","start":14,"end":26}]}"#,
    )
    .unwrap();
    let out = process_document(doc, &PipelineOptions::default()).unwrap();
    assert_eq!(out.akg.nodes.len(), 2);
    assert!(out.akg.edges.is_empty());
    assert_eq!(out.semantics.unwrap().preferred, vec![vec!["A1".to_string(), "A2".to_string()]]);
}

#[test]
fn undermining_a_premise() {
    let doc = parse_canonical_json(
        r#"{"doc_id":"um","text":"Cars are clean. That is false.",
        "components":[{"id":"T1","kind":"Premise","start":0,"end":14},{"id":"T2","kind":"Premise","start":16,"end":29}],
        "relations":[{"id":"R1","kind":"attacks","source":"T2","target":"T1"}]}"#,
    )
    .unwrap();
    let out = process_document(doc.clone(), &PipelineOptions::default()).unwrap();
    let attack = out.akg.edges_of_kind(EdgeKind::Attack).next().unwrap();
    assert_eq!(attack.attack_type, Some(AttackType::UM));
    assert!(!attack.contrary_undermine);

    let assumption =
        PipelineOptions { kind_overrides: [("T1".to_string(), PremiseKind::Assumption)].into(), ..Default::default() };
    let out = process_document(doc.clone(), &assumption).unwrap();
    assert!(out.akg.edges_of_kind(EdgeKind::Attack).next().unwrap().contrary_undermine);

    let axiom = PipelineOptions { kind_overrides: [("T1".to_string(), PremiseKind::Axiom)].into(), ..Default::default() };
    match process_document(doc, &axiom) {
        Err(PipelineError::Ekb(EkbError::Invalid(v))) => {
            assert!(v.iter().any(|x| matches!(x, argkg_core::EkbViolation::AxiomAttacked { .. })))
        }
        other => panic!("expected an axiom violation, got {other:?}"),
    }
}

#[test]
fn strict_rules_have_no_preference_sets() {
    let opts = PipelineOptions { strict_rules: ["R4".to_string()].into(), ..Default::default() };
    let out = process_document(common::essay_doc(), &opts).unwrap();
    assert_eq!(out.akg.node("A15").unwrap().attributes.to_string(), "{A15, S, \"hence\", N, N}");

    let with_prefs = PipelineOptions {
        preferences: PreferenceConfig::parse(common::ESSAY_PREFS).unwrap(),
        ..opts
    };
    assert!(matches!(
        process_document(common::essay_doc(), &with_prefs),
        Err(PipelineError::Ekb(EkbError::StrictRuleInPreference(_)))
    ));
}

#[test]
fn arguments_are_deterministic() {
    let a = common::essay();
    let b = common::essay();
    assert_eq!(a.arguments, b.arguments);
    assert_eq!(a.akg, b.akg);
}
