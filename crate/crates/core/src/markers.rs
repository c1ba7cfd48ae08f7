//! Inference-marker detection.
//!
//! Three lexical heuristics locate explicit markers and split the
//! surrounding text into an antecedent and a consequent region:
//!
//! * `ForwardInitial`: a claim marker opening a sentence, followed by a comma.
//!   The previous sentence is the antecedent, the rest of this one the consequent.
//! * `ForwardMedial`: a claim marker after a semicolon or inside a sentence.
//!   The preceding clause is the antecedent.
//! * `BackwardCausal`: a premise marker inside a sentence. The clause before
//!   it is the consequent, the clause after it the antecedent.
//!
//! Marker-less relations can be given an `Implicit` marker anchored at the
//! sentence-final punctuation between the two spans.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annotation::TextDocument;
use crate::diagnostics::Warning;
use crate::text::{fold_chars, segments, trim_span, Segment, Span, SENTENCE_TERMINATORS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Indicator {
    #[serde(rename = "Premise")]
    Premise,
    #[serde(rename = "Claim")]
    Claim,
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Indicator::Premise => "Premise",
            Indicator::Claim => "Claim",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexiconEntry {
    pub surface: String,
    pub indicator: Indicator,
}

const PREMISE_MARKERS: [&str; 12] = [
    "because",
    "since",
    "given that",
    "due to",
    "in view of",
    "in light of",
    "for the reason that",
    "as",
    "deduced",
    "derived from",
    "may be inferred",
    "in that",
];

const CLAIM_MARKERS: [&str; 16] = [
    "so",
    "therefore",
    "thus",
    "hence",
    "as a result",
    "it follows that",
    "follows that",
    "we may deduce",
    "implies",
    "accordingly",
    "consequently",
    "conclude that",
    "entails",
    "proves that",
    "shows that",
    "suggests that",
];

/// Discourse markers recorded as premise/conclusion attributes. These do not
/// signal inference rules.
const DISCOURSE_MARKERS: [&str; 16] = [
    "however",
    "for example",
    "for instance",
    "furthermore",
    "moreover",
    "in addition",
    "besides",
    "on the other hand",
    "nevertheless",
    "admittedly",
    "first of all",
    "clearly",
    "in short",
    "in conclusion",
    "to sum up",
    "in my opinion",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("lexicon line {line}: expected `surface<TAB>Premise|Claim`, got {content:?}")]
    MalformedLexiconLine { line: usize, content: String },
    #[error("lexicon surface {0:?} occurs twice")]
    DuplicateSurface(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkerLexicon {
    entries: Vec<LexiconEntry>,
}

impl MarkerLexicon {
    /// The built-in table: 12 premise indicators, 16 claim indicators.
    pub fn builtin() -> Self {
        let entries = PREMISE_MARKERS
            .iter()
            .map(|s| (s, Indicator::Premise))
            .chain(CLAIM_MARKERS.iter().map(|s| (s, Indicator::Claim)))
            .map(|(s, indicator)| LexiconEntry { surface: s.to_string(), indicator })
            .collect();
        MarkerLexicon { entries }
    }

    pub fn from_entries(entries: Vec<LexiconEntry>) -> Result<Self, LexiconError> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(fold(&e.surface)) {
                return Err(LexiconError::DuplicateSurface(e.surface.clone()));
            }
        }
        Ok(MarkerLexicon { entries })
    }

    /// Parse `surface<TAB>Premise|Claim` lines; `#` starts a comment line.
    pub fn parse(content: &str) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        for (i, line) in content.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let bad = || LexiconError::MalformedLexiconLine { line: i + 1, content: line.to_string() };
            let (surface, indicator) = line.split_once('\t').ok_or_else(bad)?;
            let surface = surface.trim();
            let indicator = match indicator.trim() {
                "Premise" => Indicator::Premise,
                "Claim" => Indicator::Claim,
                _ => return Err(bad()),
            };
            if surface.is_empty() || words(&fold_chars(surface)).is_empty() {
                return Err(bad());
            }
            entries.push(LexiconEntry { surface: surface.to_string(), indicator });
        }
        Self::from_entries(entries)
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn indicator(&self, surface: &str) -> Option<Indicator> {
        let key = fold(surface);
        self.entries.iter().find(|e| fold(&e.surface) == key).map(|e| e.indicator)
    }
}

/// The built-in lexicon, or the lexicon in `source` (which replaces it).
pub fn load_lexicon(source: Option<&str>) -> Result<MarkerLexicon, LexiconError> {
    match source {
        None => Ok(MarkerLexicon::builtin()),
        Some(content) => MarkerLexicon::parse(content),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Heuristic {
    ForwardInitial,
    ForwardMedial,
    BackwardCausal,
    Implicit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImMatch {
    /// Lexicon surface as written in the lexicon; the punctuation for implicit markers.
    pub surface: String,
    /// Marker span in the text; zero-width for implicit markers.
    pub span: Span,
    pub heuristic: Heuristic,
    pub antecedent_span: Span,
    pub consequent_span: Span,
    /// Set when a sentence-initial marker lacks the comma the heuristic expects.
    pub low_confidence: bool,
}

fn fold(s: &str) -> String {
    fold_chars(s).into_iter().collect()
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '\'' || c == '’'
}

/// Word tokens of `chars`, with hyphens kept inside words.
fn words(chars: &[char]) -> Vec<Span> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if is_word_char(chars[i]) {
            let start = i;
            while i < chars.len()
                && (is_word_char(chars[i])
                    || (chars[i] == '-' && chars.get(i + 1).is_some_and(|c| is_word_char(*c))))
            {
                i += 1;
            }
            out.push(Span::new(start, i));
        } else {
            i += 1;
        }
    }
    out
}

struct Candidate {
    span: Span,
    entry: usize,
    words: usize,
}

/// All lexicon hits, overlaps resolved longest-first then earliest-first,
/// returned in text order.
fn lexical_matches(chars: &[char], lexicon: &MarkerLexicon) -> Vec<Candidate> {
    let toks = words(chars);
    let tok_text: Vec<&[char]> = toks.iter().map(|t| &chars[t.start..t.end]).collect();
    let mut cands = Vec::new();
    for (entry_idx, entry) in lexicon.entries.iter().enumerate() {
        let folded = fold_chars(&entry.surface);
        let pattern: Vec<&[char]> = words(&folded).iter().map(|t| &folded[t.start..t.end]).collect();
        if pattern.is_empty() || pattern.len() > toks.len() {
            continue;
        }
        'outer: for i in 0..=toks.len() - pattern.len() {
            for (k, p) in pattern.iter().enumerate() {
                if tok_text[i + k] != *p {
                    continue 'outer;
                }
                if k > 0 && !chars[toks[i + k - 1].end..toks[i + k].start].iter().all(|c| c.is_whitespace()) {
                    continue 'outer;
                }
            }
            let span = Span::new(toks[i].start, toks[i + pattern.len() - 1].end);
            cands.push(Candidate { span, entry: entry_idx, words: pattern.len() });
        }
    }
    cands.sort_by(|a, b| b.span.len().cmp(&a.span.len()).then(a.span.start.cmp(&b.span.start)));
    let mut accepted: Vec<Candidate> = Vec::new();
    for c in cands {
        if accepted.iter().all(|a| !a.span.overlaps(&c.span)) {
            accepted.push(c);
        }
    }
    accepted.sort_by_key(|c| c.span.start);
    accepted
}

const FILLERS: [&str; 1] = ["the fact that"];

fn skip_filler(chars: &[char], span: Span) -> Span {
    for filler in FILLERS {
        let f: Vec<char> = filler.chars().collect();
        let end = span.start + f.len();
        if end < span.end && chars[span.start..end] == f[..] && chars[end].is_whitespace() {
            return trim_span(chars, Span::new(end, span.end), &[]);
        }
    }
    span
}

/// Detect explicit inference markers. Matching is case-insensitive and on
/// whole words; output is sorted by marker position.
pub fn detect_ims(doc: &TextDocument, lexicon: &MarkerLexicon) -> Vec<ImMatch> {
    let chars = fold_chars(&doc.raw_text);
    let segs = segments(&chars);
    let matches = lexical_matches(&chars, lexicon);
    let clause_punct = [',', ':'];
    let mut out = Vec::new();

    for (mi, m) in matches.iter().enumerate() {
        let Some(si) = segs.iter().position(|s| s.span.contains(&m.span)) else {
            continue;
        };
        let seg: &Segment = &segs[si];
        let entry = &lexicon.entries[m.entry];
        let lead_in = &chars[seg.span.start..m.span.start];
        let at_start = lead_in.iter().all(|c| matches!(c, '"' | '\'' | '(' | '“' | '‘'));
        let next_char = chars[m.span.end..seg.span.end].iter().find(|c| !c.is_whitespace());
        let followed_by_comma = next_char == Some(&',');

        // The clause before a marker starts after any earlier marker in the
        // same sentence; the clause after it runs to the end of the sentence.
        let before_start = matches[..mi]
            .iter()
            .rev()
            .find(|p| seg.span.contains(&p.span))
            .map_or(seg.span.start, |p| p.span.end);
        let before = trim_span(&chars, Span::new(before_start, m.span.start), &clause_punct);
        let after = trim_span(&chars, Span::new(m.span.end, seg.span.end), &clause_punct);

        let found = match (entry.indicator, at_start) {
            (Indicator::Claim, true) => {
                let Some(prev) = si.checked_sub(1).map(|p| segs[p]) else {
                    continue;
                };
                let after_semicolon = prev.terminator.is_some_and(|(_, c)| c == ';');
                let (heuristic, low_confidence) = if after_semicolon {
                    (Heuristic::ForwardMedial, false)
                } else if followed_by_comma {
                    (Heuristic::ForwardInitial, false)
                } else if m.words > 1 {
                    (Heuristic::ForwardInitial, true)
                } else {
                    (Heuristic::ForwardMedial, true)
                };
                Some((heuristic, low_confidence, prev.span, after))
            }
            (Indicator::Claim, false) => Some((Heuristic::ForwardMedial, false, before, after)),
            (Indicator::Premise, false) => {
                Some((Heuristic::BackwardCausal, false, skip_filler(&chars, after), before))
            }
            (Indicator::Premise, true) => {
                log::debug!("sentence-initial premise marker {:?} at {} ignored", entry.surface, m.span.start);
                None
            }
        };
        if let Some((heuristic, low_confidence, antecedent_span, consequent_span)) = found {
            if antecedent_span.is_empty() || consequent_span.is_empty() {
                continue;
            }
            out.push(ImMatch {
                surface: entry.surface.clone(),
                span: m.span,
                heuristic,
                antecedent_span,
                consequent_span,
                low_confidence,
            });
        }
    }
    out
}

/// Implicit markers for annotated relations `(source, target)` that no
/// explicit marker connects. Each is anchored just after the sentence-final
/// punctuation closing the earlier span.
pub fn resolve_implicit_ims(
    doc: &TextDocument,
    related_pairs: &[(Span, Span)],
    explicit: &[ImMatch],
) -> (Vec<ImMatch>, Vec<Warning>) {
    let chars: Vec<char> = doc.raw_text.chars().collect();
    let mut out = Vec::new();
    let mut warnings = Vec::new();
    for &(source, target) in related_pairs {
        let (earlier, later) = if source.start <= target.start { (source, target) } else { (target, source) };
        let gap = Span::new(earlier.end, later.start);
        if earlier.overlaps(&later) {
            warnings.push(Warning::NoBoundaryFound { source, target });
            continue;
        }
        if explicit.iter().any(|m| m.heuristic != Heuristic::Implicit && gap.contains(&m.span)) {
            continue;
        }
        let boundary = (gap.start..gap.end.min(chars.len())).find(|&i| SENTENCE_TERMINATORS.contains(&chars[i]));
        let Some(p) = boundary else {
            log::warn!("no sentence boundary between {source:?} and {target:?}");
            warnings.push(Warning::NoBoundaryFound { source, target });
            continue;
        };
        out.push(ImMatch {
            surface: chars[p].to_string(),
            span: Span::new(p + 1, p + 1),
            heuristic: Heuristic::Implicit,
            antecedent_span: source,
            consequent_span: target,
            low_confidence: false,
        });
    }
    out.sort_by_key(|m| m.span.start);
    (out, warnings)
}

/// First discourse marker (e.g. "however") inside `window`.
pub fn find_discourse_marker(doc: &TextDocument, window: Span) -> Option<String> {
    let chars = fold_chars(&doc.raw_text);
    let window = Span::new(window.start.min(chars.len()), window.end.min(chars.len()));
    let sub = &chars[window.start..window.end];
    let toks = words(sub);
    let mut best: Option<(usize, usize, &str)> = None;
    for marker in DISCOURSE_MARKERS {
        let folded: Vec<char> = marker.chars().collect();
        let pattern = words(&folded);
        for i in 0..toks.len() {
            if i + pattern.len() > toks.len() {
                break;
            }
            let hit = pattern.iter().enumerate().all(|(k, p)| {
                sub[toks[i + k].start..toks[i + k].end] == folded[p.start..p.end]
                    && (k == 0 || sub[toks[i + k - 1].end..toks[i + k].start].iter().all(|c| c.is_whitespace()))
            });
            if hit {
                let start = toks[i].start;
                let better = best.is_none_or(|(s, len, _)| start < s || (start == s && pattern.len() > len));
                if better {
                    best = Some((start, pattern.len(), marker));
                }
                break;
            }
        }
    }
    best.map(|(_, _, m)| m.to_string())
}

/// Sentence segment holding `offset`, for marker windows.
pub fn sentence_start(doc: &TextDocument, offset: usize) -> usize {
    let chars = fold_chars(&doc.raw_text);
    segments(&chars)
        .into_iter()
        .rev()
        .find(|s| s.span.start <= offset)
        .map_or(0, |s| s.span.start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> TextDocument {
        TextDocument::new("t", text)
    }

    fn slice(d: &TextDocument, s: Span) -> &str {
        d.slice(s).unwrap()
    }

    #[test]
    fn builtin_table_has_28_entries() {
        let lex = load_lexicon(None).unwrap();
        assert_eq!(lex.len(), 28);
        assert_eq!(lex.entries().iter().filter(|e| e.indicator == Indicator::Premise).count(), 12);
        assert_eq!(lex.entries().iter().filter(|e| e.indicator == Indicator::Claim).count(), 16);
        assert_eq!(lex.indicator("because"), Some(Indicator::Premise));
        assert_eq!(lex.indicator("Therefore"), Some(Indicator::Claim));
    }

    #[test]
    fn custom_file_replaces_builtin() {
        let lex = load_lexicon(Some("# custom\nmeanwhile\tClaim\n")).unwrap();
        assert_eq!(lex.len(), 1);
        assert_eq!(lex.indicator("meanwhile"), Some(Indicator::Claim));
        assert_eq!(lex.indicator("because"), None);
    }

    #[test]
    fn malformed_lexicon_lines() {
        assert!(matches!(load_lexicon(Some("because Premise\n")), Err(LexiconError::MalformedLexiconLine { line: 1, .. })));
        assert!(matches!(load_lexicon(Some("x\tReason\n")), Err(LexiconError::MalformedLexiconLine { .. })));
        assert!(matches!(load_lexicon(Some("\tClaim\n")), Err(LexiconError::MalformedLexiconLine { .. })));
        assert_eq!(load_lexicon(Some("So\tClaim\nso\tClaim\n")), Err(LexiconError::DuplicateSurface("so".into())));
    }

    #[test]
    fn forward_initial_example() {
        let d = doc("She was the most experienced candidate. Therefore, she was selected for the position.");
        let ims = detect_ims(&d, &MarkerLexicon::builtin());
        assert_eq!(ims.len(), 1);
        let m = &ims[0];
        assert_eq!(m.heuristic, Heuristic::ForwardInitial);
        assert_eq!(slice(&d, m.span), "Therefore");
        assert_eq!(slice(&d, m.antecedent_span), "She was the most experienced candidate");
        assert_eq!(slice(&d, m.consequent_span), "she was selected for the position");
        assert!(!m.low_confidence);
    }

    #[test]
    fn forward_medial_example() {
        let d = doc("The evidence was overwhelming; thus, the jury returned a guilty verdict.");
        let ims = detect_ims(&d, &MarkerLexicon::builtin());
        assert_eq!(ims.len(), 1);
        assert_eq!(ims[0].heuristic, Heuristic::ForwardMedial);
        assert_eq!(slice(&d, ims[0].antecedent_span), "The evidence was overwhelming");
        assert_eq!(slice(&d, ims[0].consequent_span), "the jury returned a guilty verdict");
    }

    #[test]
    fn backward_causal_example() {
        let d = doc("The event was canceled due to the fact that there was a storm.");
        let ims = detect_ims(&d, &MarkerLexicon::builtin());
        assert_eq!(ims.len(), 1);
        assert_eq!(ims[0].heuristic, Heuristic::BackwardCausal);
        assert_eq!(ims[0].surface, "due to");
        assert_eq!(slice(&d, ims[0].consequent_span), "The event was canceled");
        assert_eq!(slice(&d, ims[0].antecedent_span), "there was a storm");
    }

    #[test]
    fn longest_match_wins() {
        let d = doc("Prices rose. As a result, sales fell.");
        let ims = detect_ims(&d, &MarkerLexicon::builtin());
        assert_eq!(ims.len(), 1);
        assert_eq!(ims[0].surface, "as a result");
        assert_eq!(ims[0].heuristic, Heuristic::ForwardInitial);
    }

    #[test]
    fn multiword_initial_marker_without_comma_is_low_confidence() {
        let d = doc("Prices rose. As a result sales fell.");
        let ims = detect_ims(&d, &MarkerLexicon::builtin());
        assert_eq!(ims[0].heuristic, Heuristic::ForwardInitial);
        assert!(ims[0].low_confidence);
    }

    #[test]
    fn markers_need_word_boundaries() {
        let d = doc("He also has reasons. Thusly sober.");
        assert!(detect_ims(&d, &MarkerLexicon::builtin()).is_empty());
    }

    #[test]
    fn implicit_marker_at_period() {
        let d = doc("Cars pollute the air. Cities should ban them.");
        let src = Span::new(0, 20);
        let tgt = Span::new(22, 44);
        let (ims, warnings) = resolve_implicit_ims(&d, &[(src, tgt)], &[]);
        assert!(warnings.is_empty());
        assert_eq!(ims.len(), 1);
        assert_eq!(ims[0].heuristic, Heuristic::Implicit);
        assert_eq!(ims[0].surface, ".");
        assert_eq!(ims[0].span, Span::new(21, 21));
        assert_eq!(ims[0].antecedent_span, src);
        assert_eq!(ims[0].consequent_span, tgt);
    }

    #[test]
    fn explicit_marker_suppresses_implicit() {
        let d = doc("Cars pollute the air. Therefore, cities should ban them.");
        let explicit = detect_ims(&d, &MarkerLexicon::builtin());
        let (ims, warnings) = resolve_implicit_ims(&d, &[(Span::new(0, 20), Span::new(33, 55))], &explicit);
        assert!(ims.is_empty());
        assert!(warnings.is_empty());
    }

    #[test]
    fn intra_sentence_pair_is_skipped_with_warning() {
        let d = doc("Cars pollute and cities suffer.");
        let (ims, warnings) = resolve_implicit_ims(&d, &[(Span::new(0, 12), Span::new(17, 30))], &[]);
        assert!(ims.is_empty());
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn discourse_marker_lookup() {
        let d = doc("However, this is really short-sighted.");
        assert_eq!(find_discourse_marker(&d, Span::new(0, 37)).as_deref(), Some("however"));
        assert_eq!(find_discourse_marker(&d, Span::new(9, 37)), None);
    }
}
