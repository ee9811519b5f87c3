//! Token-level BIEO labels for extracted spans over whitespace tokens.
//!
//! `B` opens a span, `I` continues it, `E` closes it; a `B` not followed by
//! `I`/`E` is a one-token span. Spans are expected to be token aligned and
//! non-overlapping, in which case the conversion is lossless.

use std::ops::Range;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    B,
    I,
    E,
    O,
}

/// Byte ranges of the whitespace-separated tokens of `text`.
pub fn tokens(text: &str) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(s..i);
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(s..text.len());
    }
    out
}

pub fn spans_to_tags(text: &str, spans: &[Range<usize>]) -> Vec<Tag> {
    let toks = tokens(text);
    let mut tags = vec![Tag::O; toks.len()];
    for span in spans {
        let inside: Vec<usize> = (0..toks.len())
            .filter(|&i| toks[i].start >= span.start && toks[i].end <= span.end)
            .collect();
        let (Some(&first), Some(&last)) = (inside.first(), inside.last()) else {
            continue;
        };
        tags[first] = Tag::B;
        if last > first {
            tags[first + 1..last].fill(Tag::I);
            tags[last] = Tag::E;
        }
    }
    tags
}

pub fn tags_to_spans(text: &str, tags: &[Tag]) -> Vec<Range<usize>> {
    let toks = tokens(text);
    let mut out = Vec::new();
    let mut open: Option<usize> = None;
    let mut last = 0;
    for (i, (&tag, tok)) in tags.iter().zip(&toks).enumerate() {
        match tag {
            Tag::B => {
                if let Some(s) = open.take() {
                    out.push(toks[s].start..toks[last].end);
                }
                open = Some(i);
                last = i;
            }
            Tag::I => {
                if open.is_some() {
                    last = i;
                }
            }
            Tag::E => {
                if let Some(s) = open.take() {
                    out.push(toks[s].start..tok.end);
                }
            }
            Tag::O => {
                if let Some(s) = open.take() {
                    out.push(toks[s].start..toks[last].end);
                }
            }
        }
    }
    if let Some(s) = open {
        out.push(toks[s].start..toks[last].end);
    }
    out
}
