//! Input generators shared by the benchmarks.

use argkg_core::{parse_brat_ann, AfProjection, AnnotatedDocument};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ESSAY_TXT: &str = include_str!("../../core/fixtures/essay056.txt");
pub const ESSAY_ANN: &str = include_str!("../../core/fixtures/essay056.ann");
pub const ESSAY_PREFS: &str = include_str!("../../core/fixtures/essay056.prefs");

pub fn essay_doc() -> AnnotatedDocument {
    parse_brat_ann("essay056", ESSAY_TXT, ESSAY_ANN).expect("fixture is valid")
}

/// A framework over `n` arguments where each ordered pair attacks with
/// probability `density`.
pub fn random_af(n: usize, density: f64, seed: u64) -> AfProjection {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let args: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
    let mut atts = Vec::new();
    for a in &args {
        for b in &args {
            if rng.gen_bool(density) {
                atts.push((a.clone(), b.clone()));
            }
        }
    }
    AfProjection::new(args, atts).expect("members are in range")
}
