use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;

/// Smallest accepted section size.
pub const MIN_SECTION_CHARS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocFormat {
    Markdown,
    PlainText,
}

impl DocFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("md" | "markdown") => DocFormat::Markdown,
            _ => DocFormat::PlainText,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub path: Option<PathBuf>,
    pub format: DocFormat,
    pub text: String,
}

impl Document {
    pub fn new(text: impl Into<String>, format: DocFormat) -> Result<Self, PipelineError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(PipelineError::EmptyDocument);
        }
        Ok(Document {
            path: None,
            format,
            text,
        })
    }

    pub fn markdown(text: impl Into<String>) -> Result<Self, PipelineError> {
        Self::new(text, DocFormat::Markdown)
    }

    pub fn read(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut doc = Self::new(text, DocFormat::from_path(path))?;
        doc.path = Some(path.to_path_buf());
        Ok(doc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub index: usize,
    pub text: String,
    /// Byte span of `text` in the document.
    pub span: Range<usize>,
}

/// Byte ranges of blank-line separated paragraphs, trimmed.
fn paragraphs(text: &str) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut current: Option<Range<usize>> = None;
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let content = line.trim_end();
        if content.trim().is_empty() {
            if let Some(p) = current.take() {
                out.push(p);
            }
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let end = start + content.len();
        match &mut current {
            Some(p) => p.end = end,
            None => current = Some(start + lead..end),
        }
    }
    if let Some(p) = current {
        out.push(p);
    }
    out
}

fn is_heading_block(text: &str) -> bool {
    text.lines().all(|l| l.trim_start().starts_with('#'))
}

/// Where to cut `text[pos..]` so the piece stays within `max` bytes:
/// the sentence end closest to the limit, else the last whitespace, else
/// the last char boundary.
fn cut_point(text: &str, pos: usize, max: usize) -> usize {
    let mut limit = (pos + max).min(text.len());
    while !text.is_char_boundary(limit) {
        limit -= 1;
    }
    let window = &text[pos..limit];
    let bytes = window.as_bytes();
    let sentence_end = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i - 1], b'.' | b'!' | b'?') && bytes[i].is_ascii_whitespace());
    if let Some(i) = sentence_end {
        return pos + i;
    }
    if let Some(i) = window.rfind(char::is_whitespace) {
        if i > 0 {
            return pos + i;
        }
    }
    limit
}

/// Splits a document into sections at paragraph breaks; paragraphs longer
/// than `max_chars` bytes are cut at the sentence boundary nearest the
/// limit. Markdown heading blocks attach to the following paragraph.
pub fn split_sections(doc: &Document, max_chars: usize) -> Result<Vec<Section>, PipelineError> {
    if max_chars < MIN_SECTION_CHARS {
        return Err(PipelineError::InvalidConfig {
            field: "max_chars",
            reason: format!("must be at least {MIN_SECTION_CHARS}, got {max_chars}"),
        });
    }
    let text = doc.text.as_str();
    if text.trim().is_empty() {
        return Err(PipelineError::EmptyDocument);
    }

    let mut units: Vec<Range<usize>> = Vec::new();
    let mut pending: Option<usize> = None;
    for p in paragraphs(text) {
        if doc.format == DocFormat::Markdown && is_heading_block(&text[p.clone()]) {
            pending.get_or_insert(p.start);
            continue;
        }
        let start = pending.take().unwrap_or(p.start);
        units.push(start..p.end);
    }
    if let Some(start) = pending {
        units.push(start..text.trim_end().len());
    }

    let mut sections = Vec::new();
    for unit in units {
        let mut pos = unit.start;
        while pos < unit.end {
            let end = if unit.end - pos <= max_chars {
                unit.end
            } else {
                cut_point(&text[..unit.end], pos, max_chars)
            };
            let piece = &text[pos..end];
            let trimmed = piece.trim();
            if !trimmed.is_empty() {
                let lead = piece.len() - piece.trim_start().len();
                let start = pos + lead;
                sections.push(Section {
                    index: sections.len(),
                    text: trimmed.to_string(),
                    span: start..start + trimmed.len(),
                });
            }
            pos = end;
            while pos < unit.end && text[pos..].starts_with(char::is_whitespace) {
                pos += text[pos..].chars().next().map_or(1, char::len_utf8);
            }
        }
    }
    Ok(sections)
}
