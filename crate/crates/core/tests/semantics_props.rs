mod common;

use argkg_core::{
    naive_extensions, oracle_extensions, preferred_extensions, AfProjection, OracleSemantics, SemanticsError,
    DEFAULT_CAP,
};
use proptest::prelude::*;

fn arb_af(max: usize) -> impl Strategy<Value = AfProjection> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let args: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let atts: Vec<(String, String)> = (0..n * n)
                .filter(|k| bits[*k] && (k % 3 == 0))
                .map(|k| (args[k / n].clone(), args[k % n].clone()))
                .collect();
            AfProjection::new(args, atts).unwrap()
        })
    })
}

fn subsets(af: &AfProjection) -> Vec<Vec<String>> {
    (0u32..(1 << af.len()))
        .map(|m| (0..af.len()).filter(|i| m & (1 << i) != 0).map(|i| af.args[i].clone()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engine_matches_oracle(af in arb_af(9)) {
        prop_assert_eq!(naive_extensions(&af, DEFAULT_CAP).unwrap(), oracle_extensions(&af, OracleSemantics::Naive).unwrap());
        prop_assert_eq!(preferred_extensions(&af, DEFAULT_CAP).unwrap(), oracle_extensions(&af, OracleSemantics::Preferred).unwrap());
    }

    #[test]
    fn defense_is_monotone(af in arb_af(6)) {
        let all = subsets(&af);
        for s in &all {
            for t in all.iter().filter(|t| s.iter().all(|x| t.contains(x))) {
                for a in &af.args {
                    if af.is_acceptable(a, s).unwrap() {
                        prop_assert!(af.is_acceptable(a, t).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn basic_facts(af in arb_af(8)) {
        prop_assert!(af.is_admissible::<String>(&[]).unwrap());
        prop_assert_eq!(af.is_conflict_free(&af.args).unwrap(), af.atts.is_empty());
        let naive = naive_extensions(&af, DEFAULT_CAP).unwrap();
        for p in preferred_extensions(&af, DEFAULT_CAP).unwrap() {
            let p = p.member_set();
            prop_assert!(naive.iter().any(|n| p.is_subset(&n.member_set())));
        }
    }
}

#[test]
fn essay_oracle_agrees() {
    let out = common::essay();
    let mut s_ns = common::range(1, 16);
    s_ns.push("A18".into());
    let mut other = common::range(1, 15);
    other.push("A17".into());

    let naive: Vec<Vec<String>> =
        oracle_extensions(&out.af, OracleSemantics::Naive).unwrap().into_iter().map(|e| e.members).collect();
    assert_eq!(naive, vec![s_ns.clone(), other]);
    let engine: Vec<Vec<String>> =
        naive_extensions(&out.af, DEFAULT_CAP).unwrap().into_iter().map(|e| e.members).collect();
    assert_eq!(engine, naive);
    let preferred: Vec<Vec<String>> =
        oracle_extensions(&out.af, OracleSemantics::Preferred).unwrap().into_iter().map(|e| e.members).collect();
    assert_eq!(preferred, vec![s_ns]);
}

#[test]
fn acceptability_examples() {
    let out = common::essay();
    let mut s_ns = common::range(1, 16);
    s_ns.push("A18".into());
    assert!(out.af.is_acceptable("A18", &s_ns).unwrap());
    assert!(!out.af.is_acceptable("A17", &["A17"]).unwrap());
    assert!(out.af.set_attacks(&["A16"], "A17").unwrap());
    assert!(!out.af.set_attacks(&["A1"], "A17").unwrap());
}

#[test]
fn oracle_limit() {
    let args: Vec<String> = (0..21).map(|i| format!("a{i}")).collect();
    let af = AfProjection::new(args, []).unwrap();
    assert!(oracle_extensions(&af, OracleSemantics::Naive).is_err());
    assert_eq!(preferred_extensions(&af, DEFAULT_CAP).unwrap().len(), 1);
}

#[test]
fn large_sparse_framework_within_cap() {
    let args: Vec<String> = (0..60).map(|i| format!("a{i}")).collect();
    let atts: Vec<(String, String)> = (0..30).map(|i| (args[2 * i].clone(), args[2 * i + 1].clone())).collect();
    let af = AfProjection::new(args, atts).unwrap();
    let preferred = preferred_extensions(&af, DEFAULT_CAP).unwrap();
    assert_eq!(preferred.len(), 1);
    assert_eq!(preferred[0].members.len(), 30);
    let over: Vec<String> = (0..65).map(|i| format!("a{i}")).collect();
    let over = AfProjection::new(over, []).unwrap();
    assert!(matches!(preferred_extensions(&over, 100), Err(SemanticsError::TooLarge { n: 65, .. })));
}
