use std::collections::BTreeSet;
use std::ops::Range;

use serde::Serialize;

use super::clients::{ClientError, ExtractRequest, ExtractorClient};
use super::sections::Section;
use super::PipelineError;

/// A mined claim or premise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiteralSpan {
    pub id: String,
    pub section: usize,
    pub text: String,
    /// Byte span within the section text.
    pub span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub literals: Vec<LiteralSpan>,
    /// Spans the extractor returned that do not occur in the section.
    pub dropped: usize,
}

/// Literal id for the `ordinal`-th literal of a section.
pub fn literal_id(section: usize, ordinal: usize) -> String {
    format!("L{section:03}.{ordinal:02}")
}

pub(crate) fn with_retry<T>(
    mut call: impl FnMut() -> Result<T, ClientError>,
) -> Result<T, ClientError> {
    match call() {
        Ok(v) => Ok(v),
        Err(e) => {
            log::warn!("client call failed, retrying once: {e}");
            call()
        }
    }
}

/// Locates each extracted span in the section by its first exact
/// occurrence. Literals are numbered in order of position; the extractor's
/// own ids are not kept.
pub fn locate_spans<'a, I>(section_text: &str, spans: I) -> (Vec<(Range<usize>, String)>, usize)
where
    I: IntoIterator<Item = &'a str>,
{
    let mut found = BTreeSet::new();
    let mut dropped = 0;
    for span in spans {
        let span = span.trim();
        match (!span.is_empty())
            .then(|| section_text.find(span))
            .flatten()
        {
            Some(start) => {
                found.insert((start, start + span.len()));
            }
            None => dropped += 1,
        }
    }
    let located = found
        .into_iter()
        .map(|(s, e)| (s..e, section_text[s..e].to_string()))
        .collect();
    (located, dropped)
}

pub fn extract_literals(
    section: &Section,
    client: &dyn ExtractorClient,
) -> Result<Extraction, PipelineError> {
    let request = ExtractRequest {
        section_text: section.text.clone(),
    };
    let response =
        with_retry(|| client.extract(&request)).map_err(|source| PipelineError::Extractor {
            section: section.index,
            source,
        })?;
    let (located, dropped) = locate_spans(&section.text, response.values().map(String::as_str));
    if dropped > 0 {
        log::warn!(
            "section {}: dropped {dropped} span(s) not found in the section text",
            section.index
        );
    }
    let literals = located
        .into_iter()
        .enumerate()
        .map(|(i, (span, text))| LiteralSpan {
            id: literal_id(section.index, i),
            section: section.index,
            text,
            span,
        })
        .collect();
    Ok(Extraction { literals, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::clients::{ExtractResponse, MockExtractor};
    use std::sync::atomic::{AtomicU32, Ordering};

    fn section(text: &str) -> Section {
        Section {
            index: 4,
            text: text.to_string(),
            span: 0..text.len(),
        }
    }

    struct Fixed(ExtractResponse);

    impl ExtractorClient for Fixed {
        fn extract(&self, _: &ExtractRequest) -> Result<ExtractResponse, ClientError> {
            Ok(self.0.clone())
        }
    }

    #[test]
    fn mock_spans_are_located_in_order() {
        let s = section("Costs should fall. Nothing here. Prices rise because of tariffs.");
        let out = extract_literals(&s, &MockExtractor::default()).unwrap();
        assert_eq!(out.dropped, 0);
        assert_eq!(out.literals.len(), 2);
        assert_eq!(out.literals[0].id, "L004.00");
        assert_eq!(out.literals[1].text, "Prices rise because of tariffs.");
        for l in &out.literals {
            assert_eq!(&s.text[l.span.clone()], l.text);
        }
    }

    #[test]
    fn unlocatable_spans_are_dropped() {
        let s = section("Alpha beta. Gamma delta.");
        let client = Fixed(
            [
                ("x".to_string(), "Gamma delta.".to_string()),
                ("y".to_string(), "not in the text".to_string()),
                ("z".to_string(), "Alpha beta.".to_string()),
            ]
            .into(),
        );
        let out = extract_literals(&s, &client).unwrap();
        assert_eq!(out.dropped, 1);
        assert_eq!(
            out.literals
                .iter()
                .map(|l| l.text.as_str())
                .collect::<Vec<_>>(),
            vec!["Alpha beta.", "Gamma delta."]
        );
    }

    #[test]
    fn repeated_span_uses_first_occurrence() {
        let (located, _) = locate_spans("ab ab", ["ab", "ab"]);
        assert_eq!(located, vec![(0..2, "ab".to_string())]);
    }

    struct Flaky {
        calls: AtomicU32,
        failures: u32,
    }

    impl ExtractorClient for Flaky {
        fn extract(&self, _: &ExtractRequest) -> Result<ExtractResponse, ClientError> {
            if self.calls.fetch_add(1, Ordering::SeqCst) < self.failures {
                Err(ClientError::Transport("connection reset".into()))
            } else {
                Ok(ExtractResponse::new())
            }
        }
    }

    #[test]
    fn transport_errors_are_retried_once() {
        let s = section("text");
        let once = Flaky {
            calls: AtomicU32::new(0),
            failures: 1,
        };
        assert!(extract_literals(&s, &once).is_ok());
        let twice = Flaky {
            calls: AtomicU32::new(0),
            failures: 2,
        };
        assert!(matches!(
            extract_literals(&s, &twice),
            Err(PipelineError::Extractor {
                section: 4,
                source: ClientError::Transport(_)
            })
        ));
    }
}
