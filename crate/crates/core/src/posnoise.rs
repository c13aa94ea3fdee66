//! POSNoise topic masking.
//!
//! Tokens covered by the retention list, contraction clitics, and written-out
//! numbers are kept verbatim. Every other token whose tag is one of the eight
//! substitutable categories is replaced by that category's symbol; tokens with
//! any other tag (punctuation, function-word classes, interjections, ...) are
//! kept. Replacement splices symbols into the original string at token
//! offsets, so spacing and the case of retained tokens survive untouched.

use std::fmt;

use serde::Serialize;

use crate::lexicon::PatternLexicon;
use crate::text::{fold_case, is_contraction_suffix, TaggedDocument, Upos};

/// The substitution set: tag → replacement symbol.
pub const SUBSTITUTIONS: [(Upos, char); 8] = [
    (Upos::Noun, '#'),
    (Upos::Propn, '§'),
    (Upos::Verb, 'Ø'),
    (Upos::Adj, '@'),
    (Upos::Adv, '©'),
    (Upos::Num, '\u{00B5}'),
    (Upos::Sym, '$'),
    (Upos::X, '\u{00A5}'),
];

/// The replacement symbol for `tag`, if `tag` is substitutable.
pub fn substitution_symbol(tag: Upos) -> Option<char> {
    SUBSTITUTIONS
        .iter()
        .find(|(t, _)| *t == tag)
        .map(|&(_, s)| s)
}

pub fn is_mask_symbol(token: &str) -> bool {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => SUBSTITUTIONS.iter().any(|&(_, s)| s == c),
        _ => false,
    }
}

/// Why a token ended up as it did in the masked text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    RetainedByLexicon,
    RetainedByContraction,
    RetainedByNumber,
    RetainedByTag,
    Substituted(Upos),
}

impl Decision {
    pub fn is_retained(self) -> bool {
        !matches!(self, Decision::Substituted(_))
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::RetainedByLexicon => f.write_str("retained-by-lexicon"),
            Decision::RetainedByContraction => f.write_str("retained-by-contraction"),
            Decision::RetainedByNumber => f.write_str("retained-by-number"),
            Decision::RetainedByTag => f.write_str("retained-by-tag"),
            Decision::Substituted(tag) => write!(
                f,
                "substituted({})",
                substitution_symbol(*tag).unwrap_or('?')
            ),
        }
    }
}

/// How the masked text was assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Layout {
    /// Symbols spliced into the source at token offsets.
    Spliced,
    /// Output tokens re-joined with single spaces.
    Joined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaskedDocument {
    pub text: String,
    pub provenance: Vec<Decision>,
    pub layout: Layout,
}

impl MaskedDocument {
    /// Undoes detokenisation spacing on the joined path; identity otherwise.
    pub fn normalize_spacing(self) -> MaskedDocument {
        match self.layout {
            Layout::Spliced => self,
            Layout::Joined => MaskedDocument {
                text: normalize_spacing(&self.text),
                ..self
            },
        }
    }
}

const UNITS: [&str; 20] = [
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
];
const TENS: [&str; 8] = [
    "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];
const SCALES: [&str; 6] = [
    "hundred", "thousand", "million", "billion", "trillion", "dozen",
];

/// Whether `surface` is a written-out cardinal (`"twelve"`, `"one-hundred"`).
pub fn written_number(surface: &str) -> bool {
    let folded = fold_case(surface);
    !folded.is_empty()
        && folded.split('-').all(|part| {
            let part = part
                .strip_suffix('s')
                .filter(|p| SCALES.contains(p))
                .unwrap_or(part);
            UNITS.contains(&part) || TENS.contains(&part) || SCALES.contains(&part)
        })
}

fn decide(tok_surface: &str, upos: Upos, lexicon_bit: bool) -> Decision {
    if lexicon_bit {
        Decision::RetainedByLexicon
    } else if is_contraction_suffix(tok_surface) {
        Decision::RetainedByContraction
    } else if written_number(tok_surface) {
        Decision::RetainedByNumber
    } else if substitution_symbol(upos).is_some() {
        Decision::Substituted(upos)
    } else {
        Decision::RetainedByTag
    }
}

/// Masks a tagged document by splicing symbols at token offsets.
pub fn posnoise_mask(doc: &TaggedDocument, lex: &PatternLexicon) -> MaskedDocument {
    let mask = lex.retention_mask(doc);
    let provenance: Vec<Decision> = doc
        .tokens()
        .iter()
        .enumerate()
        .map(|(i, t)| decide(&t.surface, t.upos, mask.is_set(i)))
        .collect();

    // right to left
    let mut text = doc.source().to_string();
    let mut buf = [0u8; 4];
    for (tok, decision) in doc.tokens().iter().zip(&provenance).rev() {
        if let Decision::Substituted(tag) = decision {
            let sym = substitution_symbol(*tag).expect("substituted tags have symbols");
            text.replace_range(tok.start..tok.end(), sym.encode_utf8(&mut buf));
        }
    }
    MaskedDocument {
        text,
        provenance,
        layout: Layout::Spliced,
    }
}

/// Masks a bare `(surface, tag)` sequence, joining the output tokens with
/// single spaces. Used when an external tagger gives no offsets; follow with
/// [`MaskedDocument::normalize_spacing`].
pub fn posnoise_mask_tokens<S: AsRef<str>>(
    tokens: &[(S, Upos)],
    lex: &PatternLexicon,
) -> MaskedDocument {
    let surfaces: Vec<&str> = tokens.iter().map(|(s, _)| s.as_ref()).collect();
    let mask = lex.mask_tokens(&surfaces);
    let mut provenance = Vec::with_capacity(tokens.len());
    let mut out: Vec<String> = Vec::with_capacity(tokens.len());
    for (i, (surface, upos)) in tokens.iter().enumerate() {
        let d = decide(surface.as_ref(), *upos, mask.is_set(i));
        out.push(match d {
            Decision::Substituted(tag) => {
                substitution_symbol(tag).expect("substitutable").to_string()
            }
            _ => surface.as_ref().to_string(),
        });
        provenance.push(d);
    }
    MaskedDocument {
        text: out.join(" "),
        provenance,
        layout: Layout::Joined,
    }
}

/// Removes one space before `, . ; : ! ? ' )` and one space after `(`.
pub fn normalize_spacing(text: &str) -> String {
    const TIGHT_BEFORE: &[char] = &[',', '.', ';', ':', '!', '?', '\'', ')'];
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    for (i, &c) in chars.iter().enumerate() {
        if c == ' ' {
            let before_tight = chars.get(i + 1).is_some_and(|n| TIGHT_BEFORE.contains(n));
            let after_open = i > 0 && chars[i - 1] == '(';
            if before_tight || after_open {
                continue;
            }
        }
        out.push(c);
    }
    out
}
