#![allow(dead_code)]

pub mod dot;

use argkg_core::pipeline::{process_document, DocumentOutput, PipelineOptions};
use argkg_core::{parse_brat_ann, parse_canonical_json, AnnotatedDocument, PreferenceConfig};

pub const ESSAY_TXT: &str = include_str!("../../fixtures/essay056.txt");
pub const ESSAY_ANN: &str = include_str!("../../fixtures/essay056.ann");
pub const ESSAY_PREFS: &str = include_str!("../../fixtures/essay056.prefs");
pub const POLLOCK_JSON: &str = include_str!("../../fixtures/pollock.json");

pub fn essay_doc() -> AnnotatedDocument {
    parse_brat_ann("essay056", ESSAY_TXT, ESSAY_ANN).expect("essay056 parses")
}

pub fn pollock_doc() -> AnnotatedDocument {
    parse_canonical_json(POLLOCK_JSON).expect("pollock parses")
}

pub fn essay() -> DocumentOutput {
    let opts = PipelineOptions {
        preferences: PreferenceConfig::parse(ESSAY_PREFS).unwrap(),
        ..Default::default()
    };
    process_document(essay_doc(), &opts).expect("essay056 pipeline")
}

pub fn pollock() -> DocumentOutput {
    process_document(pollock_doc(), &PipelineOptions::default()).expect("pollock pipeline")
}

/// `A{from}..=A{to}` as ids.
pub fn range(from: usize, to: usize) -> Vec<String> {
    (from..=to).map(|i| format!("A{i}")).collect()
}
