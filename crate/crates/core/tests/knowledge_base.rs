mod common;

use argkg_core::ekb::{build_ekb, EkbConfig, EkbError, PreferenceConfig};
use argkg_core::{
    build_kb_graph, detect_ims, parse_canonical_json, parse_brat_ann, to_canonical_json, ElementId, IngestError,
    KbEdgeKind, KbNodeKind, MarkerLexicon, PremiseKind, RuleKind, Violation,
};

fn essay_ekb(prefs: &str) -> argkg_core::Ekb {
    let doc = common::essay_doc();
    let ims = detect_ims(&doc.document, &MarkerLexicon::builtin());
    let config = EkbConfig { preferences: PreferenceConfig::parse(prefs).unwrap(), ..Default::default() };
    build_ekb(&doc, &ims, &config).unwrap().0
}

#[test]
fn essay_ingest_counts() {
    let doc = common::essay_doc();
    assert_eq!(doc.components.len(), 15);
    assert_eq!(doc.relations.len(), 10);
    assert_eq!(doc.stances.len(), 2);
    assert_eq!(doc.component("T13").unwrap().surface_text, "the culture heritage and nation identity vanish");
}

#[test]
fn canonical_json_round_trip() {
    let doc = common::essay_doc();
    let json = to_canonical_json(&doc);
    let back = parse_canonical_json(&json).unwrap();
    assert_eq!(back, doc);
    assert_eq!(to_canonical_json(&back), json);
}

#[test]
fn ingest_rejects_bad_documents() {
    let bad_span = common::ESSAY_ANN.replace("T2\tPremise 248 314", "T2\tPremise 249 314");
    match parse_brat_ann("e", common::ESSAY_TXT, &bad_span) {
        Err(IngestError::Invalid(v)) => assert!(v.contains(&Violation::SpanMismatch { comp_id: "T2".into() })),
        other => panic!("expected span mismatch, got {other:?}"),
    }
    let dangling = format!("{}R11\tsupports Arg1:T99 Arg2:T3\n", common::ESSAY_ANN);
    assert!(matches!(parse_brat_ann("e", common::ESSAY_TXT, &dangling), Err(IngestError::Invalid(_))));
    let garbage = format!("{}Q1\tnonsense\n", common::ESSAY_ANN);
    assert!(matches!(parse_brat_ann("e", common::ESSAY_TXT, &garbage), Err(IngestError::MalformedLine { .. })));
}

#[test]
fn essay_rules_and_functions() {
    let ekb = essay_ekb("");
    let ims: Vec<Option<&str>> = ekb.rules.iter().map(|r| r.im.as_deref()).collect();
    assert_eq!(ims, [Some("so"), Some("thus"), Some("therefore"), Some("hence")]);
    assert!(ekb.rules.iter().all(|r| r.kind == RuleKind::Defeasible));
    assert_eq!(ekb.strict_rules().count(), 0);
    let consequents: Vec<&str> = ekb.rules.iter().map(|r| r.consequent.as_str()).collect();
    assert_eq!(consequents, ["T3", "T5", "T9", "T13"]);

    assert_eq!(ekb.knowledge.ordinary.len(), 11);
    assert!(ekb.knowledge.axioms.is_empty() && ekb.knowledge.assumptions.is_empty());
    assert_eq!(ekb.knowledge.len() + ekb.rules.len(), 15);
    assert_eq!(ekb.formula(&"T11".into()).unwrap().premise_kind, None);

    assert!(ekb.kb_contraries().is_empty());
    assert_eq!(ekb.kb_agreements().len(), 7);
    assert_eq!(ekb.contraries_of(&"T13".into()).unwrap(), [ElementId::from("T14")].into());
    for f in ekb.premises() {
        assert!(ekb.kb_contraries().sources_of(&f.id).is_empty());
    }
}

#[test]
fn essay_preferences() {
    let by_rules = essay_ekb("R2 > R1 > R3 > R4");
    let (l1, l2) = by_rules.rule_preference_sets(&"R2".into()).unwrap().unwrap();
    assert!(l2.is_empty());
    assert_eq!(l1, ["R1", "R3", "R4"].map(ElementId::from).into());
    let by_args = common::essay().ekb;
    assert_eq!(by_args.rule_pref, by_rules.rule_pref);

    let doc = common::essay_doc();
    let ims = detect_ims(&doc.document, &MarkerLexicon::builtin());
    let config = EkbConfig { preferences: PreferenceConfig::parse("A5 > A2").unwrap(), ..Default::default() };
    assert_eq!(build_ekb(&doc, &ims, &config).unwrap_err(), EkbError::UnknownPreferenceTarget("A5".into()));
}

#[test]
fn essay_kb_graph() {
    let ekb = essay_ekb("R2 > R1 > R3 > R4");
    let kb = build_kb_graph(&ekb, "essay056");
    assert_eq!(kb.nodes.len(), 15);
    assert_eq!(kb.nodes.iter().filter(|n| n.kind == KbNodeKind::InferenceRulePremise).count(), 4);
    assert_eq!(kb.edges_of_kind(KbEdgeKind::Support).count(), 7);
    assert_eq!(kb.edges_of_kind(KbEdgeKind::Attack).count(), 0);
    assert_eq!(kb.node(&"R2".into()).unwrap().attributes.to_string(), "{R2, D, \"thus\", {R1, R3, R4}, φ}");
    assert_eq!(kb.node(&"T14".into()).unwrap().attributes.to_string(), "{\"however\", p}");
}

#[test]
fn kind_overrides_move_premises() {
    let doc = common::essay_doc();
    let ims = detect_ims(&doc.document, &MarkerLexicon::builtin());
    let config = EkbConfig {
        kind_overrides: [("T14".to_string(), PremiseKind::Assumption)].into(),
        ..Default::default()
    };
    let (ekb, _) = build_ekb(&doc, &ims, &config).unwrap();
    assert_eq!(ekb.knowledge.kind_of(&"T14".into()), Some(PremiseKind::Assumption));
    let kb = build_kb_graph(&ekb, "essay056");
    assert_eq!(kb.node(&"T14".into()).unwrap().attributes.to_string(), "{\"however\", a}");

    let bad = EkbConfig { kind_overrides: [("T99".to_string(), PremiseKind::Axiom)].into(), ..Default::default() };
    assert!(build_ekb(&doc, &ims, &bad).is_err());
}
