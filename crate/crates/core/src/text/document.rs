use serde::{Deserialize, Serialize};

use super::tokenize::Span;
use super::upos::Upos;

/// A token of a source document with its Universal POS tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    /// Byte offset into the document source.
    pub start: usize,
    pub upos: Upos,
}

impl TaggedToken {
    pub fn len(&self) -> usize {
        self.surface.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surface.is_empty()
    }

    pub fn end(&self) -> usize {
        self.start + self.surface.len()
    }

    pub fn span(&self) -> Span {
        Span::new(self.start, self.surface.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("token {index} is empty")]
    EmptyToken { index: usize },
    #[error("token {index} ({start}+{len}) lies outside the source ({source_len} bytes) or splits a character")]
    OutOfBounds {
        index: usize,
        start: usize,
        len: usize,
        source_len: usize,
    },
    #[error("token {index}: surface {surface:?} does not match source slice {found:?}")]
    OffsetMismatch {
        index: usize,
        surface: String,
        found: String,
    },
    #[error("token {index} starts at {start}, before the end of the previous token ({prev_end})")]
    Overlap {
        index: usize,
        start: usize,
        prev_end: usize,
    },
}

/// A source text with its ordered, non-overlapping tagged tokens.
///
/// Construction checks offset fidelity, so splicing the token surfaces back
/// into the gaps always reproduces `source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaggedDocument {
    source: String,
    tokens: Vec<TaggedToken>,
}

impl TaggedDocument {
    pub fn new(source: impl Into<String>, tokens: Vec<TaggedToken>) -> Result<Self, DocumentError> {
        let source = source.into();
        let mut prev_end = 0;
        for (index, tok) in tokens.iter().enumerate() {
            if tok.is_empty() {
                return Err(DocumentError::EmptyToken { index });
            }
            if tok.start < prev_end {
                return Err(DocumentError::Overlap {
                    index,
                    start: tok.start,
                    prev_end,
                });
            }
            let found = source
                .get(tok.start..tok.end())
                .ok_or(DocumentError::OutOfBounds {
                    index,
                    start: tok.start,
                    len: tok.len(),
                    source_len: source.len(),
                })?;
            if found != tok.surface {
                return Err(DocumentError::OffsetMismatch {
                    index,
                    surface: tok.surface.clone(),
                    found: found.to_string(),
                });
            }
            prev_end = tok.end();
        }
        Ok(TaggedDocument { source, tokens })
    }

    /// Builds a document from spans and tags of equal length.
    pub fn from_spans(
        source: impl Into<String>,
        spans: &[Span],
        tags: &[Upos],
    ) -> Result<Self, DocumentError> {
        assert_eq!(spans.len(), tags.len(), "one tag per span");
        let source = source.into();
        let mut tokens = Vec::with_capacity(spans.len());
        for (index, (span, &upos)) in spans.iter().zip(tags).enumerate() {
            let surface = source
                .get(span.start..span.end())
                .ok_or(DocumentError::OutOfBounds {
                    index,
                    start: span.start,
                    len: span.len,
                    source_len: source.len(),
                })?;
            tokens.push(TaggedToken {
                surface: surface.to_string(),
                start: span.start,
                upos,
            });
        }
        Self::new(source, tokens)
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn tokens(&self) -> &[TaggedToken] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The byte regions between tokens, `len() + 1` of them (leading gap,
    /// inter-token gaps, trailing gap).
    pub fn gaps(&self) -> Vec<&str> {
        let mut gaps = Vec::with_capacity(self.tokens.len() + 1);
        let mut pos = 0;
        for tok in &self.tokens {
            gaps.push(&self.source[pos..tok.start]);
            pos = tok.end();
        }
        gaps.push(&self.source[pos..]);
        gaps
    }

    /// Interleaves gaps with the given per-token replacement strings.
    pub fn splice<'a, I>(&self, replacements: I) -> String
    where
        I: IntoIterator<Item = &'a str>,
    {
        let gaps = self.gaps();
        let mut out = String::with_capacity(self.source.len());
        let mut reps = replacements.into_iter();
        for (i, gap) in gaps.iter().enumerate() {
            out.push_str(gap);
            if i < self.tokens.len() {
                out.push_str(reps.next().expect("one replacement per token"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize::tokenize;

    fn tok(surface: &str, start: usize) -> TaggedToken {
        TaggedToken {
            surface: surface.into(),
            start,
            upos: Upos::X,
        }
    }

    #[test]
    fn rejects_surface_mismatch() {
        let err = TaggedDocument::new("abc def", vec![tok("abd", 0)]).unwrap_err();
        assert!(matches!(
            err,
            DocumentError::OffsetMismatch { index: 0, .. }
        ));
    }

    #[test]
    fn rejects_overlap_and_bounds() {
        let err = TaggedDocument::new("abc", vec![tok("abc", 0), tok("c", 2)]).unwrap_err();
        assert!(matches!(err, DocumentError::Overlap { index: 1, .. }));
        let err = TaggedDocument::new("ab", vec![tok("abc", 0)]).unwrap_err();
        assert!(matches!(err, DocumentError::OutOfBounds { .. }));
        // splitting the two-byte '§'
        let err = TaggedDocument::new("§", vec![tok("x", 1)]).unwrap_err();
        assert!(matches!(err, DocumentError::OutOfBounds { .. }));
    }

    #[test]
    fn splice_identity_reproduces_source() {
        let text = "  Hello,  wörld §12 ";
        let spans = tokenize(text);
        let doc = TaggedDocument::from_spans(text, &spans, &vec![Upos::X; spans.len()]).unwrap();
        let same = doc.splice(doc.tokens().iter().map(|t| t.surface.as_str()));
        assert_eq!(same, text);
        assert_eq!(doc.gaps().len(), doc.len() + 1);
    }
}
