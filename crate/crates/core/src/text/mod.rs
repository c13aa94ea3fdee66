//! Tokenization, POS tagging, and tagged-document ingestion.

mod document;
mod tagged_file;
mod tagger;
mod tokenize;
mod upos;

pub use document::{DocumentError, TaggedDocument, TaggedToken};
pub use tagged_file::{parse_tagged, write_tagged, TaggedFileError};
pub use tagger::{is_roman_numeral, LexiconTagger, Tagger};
pub use tokenize::{fold_case, is_contraction_suffix, tokenize, Span, CONTRACTION_SUFFIXES};
pub use upos::{UnknownTag, Upos};
