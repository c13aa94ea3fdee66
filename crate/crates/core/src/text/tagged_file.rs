//! Reader and writer for externally tagged documents.
//!
//! One token per line, `start<TAB>length<TAB>surface<TAB>upos`, with byte
//! offsets into a separate raw-text file. Lines starting with `#` are
//! comments; a blank line ends a document. Offsets are absolute positions in
//! the raw text; document `i` owns the raw bytes from the first token of its
//! block (or byte 0 for the first document) up to the first token of the next
//! block (or the end of the text). Concatenating the documents' sources
//! therefore reproduces the raw text.

use std::fmt::Write as _;

use super::document::{TaggedDocument, TaggedToken};
use super::upos::Upos;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TaggedFileError {
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("line {line}: surface {surface:?} does not match raw text {found:?} at {start}+{len}")]
    OffsetMismatch {
        line: usize,
        start: usize,
        len: usize,
        surface: String,
        found: String,
    },
    #[error("line {line}: unknown tag `{tag}`")]
    UnknownTag { line: usize, tag: String },
    #[error("line {line}: token at {start} overlaps or precedes the previous token (ends at {prev_end})")]
    OutOfOrder {
        line: usize,
        start: usize,
        prev_end: usize,
    },
}

struct Record {
    start: usize,
    surface: String,
    upos: Upos,
}

/// Parses a tagged file against its raw text.
pub fn parse_tagged(raw: &str, tagged: &str) -> Result<Vec<TaggedDocument>, TaggedFileError> {
    let mut blocks: Vec<Vec<Record>> = vec![Vec::new()];
    let mut prev_end = 0usize;

    for (idx, line) in tagged.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.starts_with('#') {
            continue;
        }
        if line.trim().is_empty() {
            if !blocks.last().expect("non-empty").is_empty() {
                blocks.push(Vec::new());
            }
            continue;
        }
        let rec = parse_record(raw, line, line_no, prev_end)?;
        prev_end = rec.start + rec.surface.len();
        blocks.last_mut().expect("non-empty").push(rec);
    }
    if blocks.last().is_some_and(Vec::is_empty) {
        blocks.pop();
    }
    if blocks.is_empty() {
        // A file with no records describes the raw text as one untokenised document.
        return Ok(vec![
            TaggedDocument::new(raw, Vec::new()).expect("no tokens")
        ]);
    }

    let starts: Vec<usize> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| if i == 0 { 0 } else { b[0].start })
        .collect();
    let mut docs = Vec::with_capacity(blocks.len());
    for (i, block) in blocks.into_iter().enumerate() {
        let seg_start = starts[i];
        let seg_end = starts.get(i + 1).copied().unwrap_or(raw.len());
        let tokens = block
            .into_iter()
            .map(|r| TaggedToken {
                surface: r.surface,
                start: r.start - seg_start,
                upos: r.upos,
            })
            .collect();
        let doc = TaggedDocument::new(&raw[seg_start..seg_end], tokens)
            .expect("records were validated against the raw text");
        docs.push(doc);
    }
    Ok(docs)
}

fn parse_record(
    raw: &str,
    line: &str,
    line_no: usize,
    prev_end: usize,
) -> Result<Record, TaggedFileError> {
    let malformed = |reason: String| TaggedFileError::MalformedRecord {
        line: line_no,
        reason,
    };
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 4 {
        return Err(malformed(format!(
            "expected 4 tab-separated fields, found {}",
            fields.len()
        )));
    }
    let start: usize = fields[0]
        .parse()
        .map_err(|_| malformed(format!("bad start offset {:?}", fields[0])))?;
    let len: usize = fields[1]
        .parse()
        .map_err(|_| malformed(format!("bad length {:?}", fields[1])))?;
    let surface = fields[2];
    if surface.is_empty() || len == 0 {
        return Err(malformed("empty token".into()));
    }
    let upos: Upos = fields[3].parse().map_err(|_| TaggedFileError::UnknownTag {
        line: line_no,
        tag: fields[3].to_string(),
    })?;
    if start < prev_end {
        return Err(TaggedFileError::OutOfOrder {
            line: line_no,
            start,
            prev_end,
        });
    }
    let found = start
        .checked_add(len)
        .and_then(|end| raw.get(start..end))
        .unwrap_or("");
    if found != surface || surface.len() != len {
        return Err(TaggedFileError::OffsetMismatch {
            line: line_no,
            start,
            len,
            surface: surface.to_string(),
            found: found.to_string(),
        });
    }
    Ok(Record {
        start,
        surface: surface.to_string(),
        upos,
    })
}

/// Serialises documents so that [`parse_tagged`] over the concatenated
/// sources returns them again. `extra` adds trailing columns per token.
pub fn write_tagged<F>(docs: &[TaggedDocument], mut extra: F) -> String
where
    F: FnMut(usize, usize) -> Vec<String>,
{
    let mut out = String::new();
    let mut base = 0;
    for (d, doc) in docs.iter().enumerate() {
        for (t, tok) in doc.tokens().iter().enumerate() {
            let _ = write!(
                out,
                "{}\t{}\t{}\t{}",
                base + tok.start,
                tok.len(),
                tok.surface,
                tok.upos
            );
            for col in extra(d, t) {
                out.push('\t');
                out.push_str(&col);
            }
            out.push('\n');
        }
        out.push('\n');
        base += doc.source().len();
    }
    out
}
