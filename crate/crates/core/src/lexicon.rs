//! The retention list of function words and phrases, and the matcher that
//! turns it into a per-token retention mask.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::text::{fold_case, tokenize, TaggedDocument};

const BUNDLED_PATTERNS: &str = include_str!("../assets/patterns.txt");

/// Version of the bundled pattern list.
pub const PATTERN_LIST_VERSION: &str = "1.0.0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    Contractions,
    AuxiliaryVerbs,
    DelexicalisedVerbs,
    Conjunctions,
    Determiners,
    Prepositions,
    Pronouns,
    Quantifiers,
    GenericAdverbs,
    TransitionalPhrases,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::Contractions,
        Category::AuxiliaryVerbs,
        Category::DelexicalisedVerbs,
        Category::Conjunctions,
        Category::Determiners,
        Category::Prepositions,
        Category::Pronouns,
        Category::Quantifiers,
        Category::GenericAdverbs,
        Category::TransitionalPhrases,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Contractions => "contractions",
            Category::AuxiliaryVerbs => "auxiliary verbs",
            Category::DelexicalisedVerbs => "delexicalised verbs",
            Category::Conjunctions => "conjunctions",
            Category::Determiners => "determiners",
            Category::Prepositions => "prepositions",
            Category::Pronouns => "pronouns",
            Category::Quantifiers => "quantifiers",
            Category::GenericAdverbs => "generic adverbs",
            Category::TransitionalPhrases => "transitional phrases",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        let norm = s.trim().to_lowercase().replace(['_', '-'], " ");
        let norm = norm.replace("delexicalized", "delexicalised");
        Category::ALL
            .iter()
            .copied()
            .find(|c| c.name() == norm)
            .ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("line {line}: pattern has no tokens")]
    EmptyPattern { line: usize },
    #[error("line {line}: duplicate pattern `{pattern}` (first seen on line {first})")]
    DuplicatePattern {
        line: usize,
        first: usize,
        pattern: String,
    },
    #[error("line {line}: unknown category header `[{header}]`")]
    UnknownCategoryHeader { line: usize, header: String },
}

/// A retention pattern: a non-empty sequence of case-folded tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub tokens: Vec<String>,
    pub category: Option<Category>,
}

impl Pattern {
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// An immutable, validated retention list.
#[derive(Clone, Debug)]
pub struct PatternLexicon {
    entries: Vec<Pattern>,
    by_first: HashMap<String, Vec<usize>>,
    vocabulary: HashSet<String>,
}

impl PatternLexicon {
    /// Parses the line-oriented pattern file format.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        let mut seen: HashMap<Vec<String>, usize> = HashMap::new();
        let mut category = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                category =
                    Some(
                        header
                            .parse()
                            .map_err(|_| LexiconError::UnknownCategoryHeader {
                                line: line_no,
                                header: header.to_string(),
                            })?,
                    );
                continue;
            }
            let tokens: Vec<String> = tokenize(line)
                .iter()
                .map(|s| fold_case(s.slice(line)))
                .collect();
            if tokens.is_empty() {
                return Err(LexiconError::EmptyPattern { line: line_no });
            }
            if let Some(&first) = seen.get(&tokens) {
                return Err(LexiconError::DuplicatePattern {
                    line: line_no,
                    first,
                    pattern: tokens.join(" "),
                });
            }
            seen.insert(tokens.clone(), line_no);
            entries.push(Pattern { tokens, category });
        }
        Ok(Self::from_patterns(entries))
    }

    /// Builds a lexicon from already tokenized patterns. Tokens are case-folded.
    ///
    /// Panics on empty patterns; duplicates are dropped.
    pub fn from_patterns(patterns: Vec<Pattern>) -> Self {
        let mut entries: Vec<Pattern> = Vec::with_capacity(patterns.len());
        let mut seen = HashSet::new();
        for mut p in patterns {
            assert!(!p.tokens.is_empty(), "empty pattern");
            p.tokens = p.tokens.iter().map(|t| fold_case(t)).collect();
            if seen.insert(p.tokens.clone()) {
                entries.push(p);
            }
        }
        let mut by_first: HashMap<String, Vec<usize>> = HashMap::new();
        let mut vocabulary = HashSet::new();
        for (i, p) in entries.iter().enumerate() {
            by_first.entry(p.tokens[0].clone()).or_default().push(i);
            vocabulary.extend(p.tokens.iter().cloned());
        }
        PatternLexicon {
            entries,
            by_first,
            vocabulary,
        }
    }

    /// The reconstructed retention list shipped with the crate.
    pub fn bundled() -> &'static PatternLexicon {
        static LEX: OnceLock<PatternLexicon> = OnceLock::new();
        LEX.get_or_init(|| {
            PatternLexicon::parse(BUNDLED_PATTERNS).expect("bundled pattern list is valid")
        })
    }

    pub fn entries(&self) -> &[Pattern] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether a (case-folded) token occurs in any pattern.
    pub fn contains_token(&self, token: &str) -> bool {
        self.vocabulary.contains(&fold_case(token))
    }

    /// Every distinct token that occurs in some pattern.
    pub fn vocabulary(&self) -> &HashSet<String> {
        &self.vocabulary
    }

    /// Marks every token covered by an occurrence of some pattern.
    pub fn retention_mask(&self, doc: &TaggedDocument) -> RetentionMask {
        let folded: Vec<String> = doc.tokens().iter().map(|t| fold_case(&t.surface)).collect();
        self.mask_folded(&folded)
    }

    /// As [`retention_mask`](Self::retention_mask) over raw token strings.
    pub fn mask_tokens<S: AsRef<str>>(&self, tokens: &[S]) -> RetentionMask {
        let folded: Vec<String> = tokens.iter().map(|t| fold_case(t.as_ref())).collect();
        self.mask_folded(&folded)
    }

    fn mask_folded(&self, folded: &[String]) -> RetentionMask {
        let mut bits = vec![false; folded.len()];
        for start in 0..folded.len() {
            let Some(candidates) = self.by_first.get(&folded[start]) else {
                continue;
            };
            for &pi in candidates {
                let pat = &self.entries[pi].tokens;
                let end = start + pat.len();
                if end <= folded.len() && folded[start..end] == pat[..] {
                    bits[start..end].iter_mut().for_each(|b| *b = true);
                }
            }
        }
        RetentionMask { bits }
    }
}

/// One flag per document token; set flags are retained verbatim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetentionMask {
    bits: Vec<bool>,
}

impl RetentionMask {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_set(&self, i: usize) -> bool {
        self.bits[i]
    }
}

/// Loads and validates a pattern file.
pub fn load_lexicon(text: &str) -> Result<PatternLexicon, LexiconError> {
    PatternLexicon::parse(text)
}

/// Computes the retention mask of `doc` under `lex`.
pub fn match_patterns(doc: &TaggedDocument, lex: &PatternLexicon) -> RetentionMask {
    lex.retention_mask(doc)
}
