//! Character-offset spans and light text segmentation.
//!
//! All offsets are 0-based, end-exclusive and counted in Unicode scalar
//! values, as brat does.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains_offset(&self, offset: usize) -> bool {
        self.start <= offset && offset < self.end
    }
}

/// A text with a precomputed char-offset to byte-offset table.
#[derive(Debug, Clone)]
pub struct CharText<'a> {
    text: &'a str,
    bytes: Vec<usize>,
}

impl<'a> CharText<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut bytes: Vec<usize> = text.char_indices().map(|(b, _)| b).collect();
        bytes.push(text.len());
        CharText { text, bytes }
    }

    pub fn char_len(&self) -> usize {
        self.bytes.len() - 1
    }

    pub fn slice(&self, span: Span) -> Option<&'a str> {
        if span.start > span.end || span.end > self.char_len() {
            return None;
        }
        Some(&self.text[self.bytes[span.start]..self.bytes[span.end]])
    }
}

/// Lowercased chars of `text`, one output char per input char.
pub fn fold_chars(text: &str) -> Vec<char> {
    text.chars()
        .map(|c| {
            let mut lower = c.to_lowercase();
            match (lower.next(), lower.next()) {
                (Some(l), None) => l,
                _ => c,
            }
        })
        .collect()
}

/// Shrink `span` past leading/trailing whitespace and the given punctuation.
pub fn trim_span(chars: &[char], span: Span, punct: &[char]) -> Span {
    let skip = |c: char| c.is_whitespace() || punct.contains(&c);
    let mut start = span.start.min(chars.len());
    let mut end = span.end.min(chars.len());
    while start < end && skip(chars[start]) {
        start += 1;
    }
    while end > start && skip(chars[end - 1]) {
        end -= 1;
    }
    Span::new(start, end)
}

pub const SENTENCE_TERMINATORS: [char; 4] = ['.', '!', '?', ';'];

/// A sentence or semicolon-delimited clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    /// Content without surrounding whitespace or the terminator.
    pub span: Span,
    /// Offset of the terminating punctuation, if any.
    pub terminator: Option<(usize, char)>,
}

/// Split on `.`, `!`, `?`, `;` followed by whitespace (or end of text), and on
/// newlines. No abbreviation handling.
pub fn segments(chars: &[char]) -> Vec<Segment> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    let push = |out: &mut Vec<Segment>, s: usize, e: usize, term: Option<(usize, char)>| {
        let span = trim_span(chars, Span::new(s, e), &[]);
        if !span.is_empty() {
            out.push(Segment { span, terminator: term });
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            push(&mut out, start, i, None);
            start = i + 1;
        } else if SENTENCE_TERMINATORS.contains(&c)
            && chars.get(i + 1).is_none_or(|n| n.is_whitespace())
        {
            push(&mut out, start, i, Some((i, c)));
            start = i + 1;
        }
        i += 1;
    }
    push(&mut out, start, chars.len(), None);
    out
}

/// Non-empty lines, as paragraph spans.
pub fn paragraph_spans(text: &str) -> Vec<Span> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in text.split('\n') {
        let n = line.chars().count();
        let chars: Vec<char> = line.chars().collect();
        let trimmed = trim_span(&chars, Span::new(0, n), &[]);
        if !trimmed.is_empty() {
            out.push(Span::new(offset + trimmed.start, offset + trimmed.end));
        }
        offset += n + 1;
    }
    out
}

/// Whitespace-normalized copy of `s`.
pub fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
