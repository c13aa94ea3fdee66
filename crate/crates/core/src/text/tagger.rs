use std::collections::HashMap;
use std::sync::OnceLock;

use super::document::TaggedDocument;
use super::tokenize::{tokenize, Span};
use super::upos::Upos;

/// A part-of-speech tagger producing Universal POS tags.
///
/// Implementations must be deterministic: identical input yields identical
/// tags.
pub trait Tagger: Send + Sync {
    /// One tag per span, in span order.
    fn tag_spans(&self, source: &str, spans: &[Span]) -> Vec<Upos>;

    /// Tokenizes and tags `text`.
    fn tag(&self, text: &str) -> TaggedDocument {
        let spans = tokenize(text);
        let tags = self.tag_spans(text, &spans);
        TaggedDocument::from_spans(text, &spans, &tags).expect("tokenizer spans are valid")
    }
}

const BUNDLED_LEXICON: &str = include_str!("../../assets/tagger_lexicon.txt");

const PUNCTUATION: &str = ".,;:!?'\"()[]{}-–—…/«»“”‘’¡¿";

/// Dictionary tagger with rule-based fallbacks for unknown words.
///
/// Lookup order: exact spelling, then lowercase; numbers and roman numerals
/// become `NUM`; single non-alphanumeric characters become `PUNCT` or `SYM`;
/// capitalised unknown words that do not start a sentence become `PROPN`;
/// suffix rules guess open classes; a capitalised unknown word at sentence
/// start is `PROPN`; everything else is `X`.
#[derive(Clone, Debug)]
pub struct LexiconTagger {
    exact: HashMap<String, Upos>,
    folded: HashMap<String, Upos>,
}

impl LexiconTagger {
    /// Parses a `TAG<TAB>word word ...` table. The first entry for a word wins.
    pub fn from_table(table: &str) -> Result<Self, super::upos::UnknownTag> {
        let mut exact = HashMap::new();
        let mut folded = HashMap::new();
        for line in table.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let Some(tag) = fields.next() else { continue };
            let tag: Upos = tag.parse()?;
            for word in fields {
                if word.chars().any(char::is_uppercase) {
                    exact.entry(word.to_string()).or_insert(tag);
                } else {
                    folded.entry(word.to_string()).or_insert(tag);
                }
            }
        }
        Ok(LexiconTagger { exact, folded })
    }

    /// The tagger backed by the bundled English word table.
    pub fn bundled() -> &'static LexiconTagger {
        static TAGGER: OnceLock<LexiconTagger> = OnceLock::new();
        TAGGER.get_or_init(|| {
            LexiconTagger::from_table(BUNDLED_LEXICON).expect("bundled tagger table is valid")
        })
    }

    fn lookup(&self, surface: &str) -> Option<Upos> {
        self.exact
            .get(surface)
            .or_else(|| self.folded.get(&super::tokenize::fold_case(surface)))
            .copied()
    }

    fn tag_one(&self, surface: &str, sentence_initial: bool) -> Upos {
        if let Some(tag) = self.lookup(surface) {
            return tag;
        }
        if is_numeric_token(surface) || is_roman_numeral(surface) {
            return Upos::Num;
        }
        let mut chars = surface.chars();
        let first = chars.next().expect("tokens are non-empty");
        if chars.next().is_none() && !first.is_alphanumeric() {
            return if PUNCTUATION.contains(first) {
                Upos::Punct
            } else {
                Upos::Sym
            };
        }
        if !surface.chars().any(char::is_alphanumeric) {
            return Upos::Sym;
        }
        let capitalised = first.is_uppercase();
        let all_caps = surface.chars().filter(|c| c.is_alphabetic()).count() > 1
            && surface
                .chars()
                .filter(|c| c.is_alphabetic())
                .all(char::is_uppercase);
        if capitalised && (!sentence_initial || all_caps) {
            return Upos::Propn;
        }
        if let Some(tag) = self.by_inflection(surface).or_else(|| by_suffix(surface)) {
            return tag;
        }
        if capitalised {
            return Upos::Propn;
        }
        Upos::X
    }

    /// Plural / third-person `-s` forms of known nouns and verbs.
    fn by_inflection(&self, surface: &str) -> Option<Upos> {
        let lower = super::tokenize::fold_case(surface);
        let stems = [
            lower.strip_suffix("ies").map(|s| format!("{s}y")),
            lower.strip_suffix("es").map(str::to_string),
            lower.strip_suffix('s').map(str::to_string),
        ];
        stems
            .into_iter()
            .flatten()
            .filter(|s| s.len() > 1)
            .find_map(|s| match self.folded.get(&s) {
                Some(&t @ (Upos::Noun | Upos::Verb)) => Some(t),
                _ => None,
            })
    }
}

impl Tagger for LexiconTagger {
    fn tag_spans(&self, source: &str, spans: &[Span]) -> Vec<Upos> {
        let mut tags = Vec::with_capacity(spans.len());
        let mut sentence_initial = true;
        for span in spans {
            let surface = span.slice(source);
            tags.push(self.tag_one(surface, sentence_initial));
            sentence_initial = match surface {
                "." | "!" | "?" | "…" => true,
                "\"" | "“" | "”" | "'" | "‘" | "(" | "[" => sentence_initial,
                _ => false,
            };
        }
        tags
    }
}

fn by_suffix(surface: &str) -> Option<Upos> {
    const RULES: [(&str, Upos); 16] = [
        ("ly", Upos::Adv),
        ("ing", Upos::Verb),
        ("ed", Upos::Verb),
        ("ize", Upos::Verb),
        ("ise", Upos::Verb),
        ("ous", Upos::Adj),
        ("ful", Upos::Adj),
        ("ive", Upos::Adj),
        ("able", Upos::Adj),
        ("ible", Upos::Adj),
        ("tion", Upos::Noun),
        ("sion", Upos::Noun),
        ("ment", Upos::Noun),
        ("ness", Upos::Noun),
        ("ity", Upos::Noun),
        ("ism", Upos::Noun),
    ];
    let lower = super::tokenize::fold_case(surface);
    if !lower.chars().all(|c| c.is_alphabetic() || c == '-') {
        return None;
    }
    RULES
        .iter()
        .find(|(suffix, _)| lower.len() > suffix.len() + 2 && lower.ends_with(suffix))
        .map(|&(_, tag)| tag)
}

/// Digit runs, optionally with `.`/`,` separators between digits.
fn is_numeric_token(surface: &str) -> bool {
    surface.chars().next().is_some_and(|c| c.is_ascii_digit())
        && surface
            .chars()
            .all(|c| c.is_ascii_digit() || c == '.' || c == ',')
}

/// Upper-case roman numerals of at least two letters with valid structure.
pub fn is_roman_numeral(surface: &str) -> bool {
    if surface.len() < 2 || !surface.bytes().all(|b| b"IVXLCDM".contains(&b)) {
        return false;
    }
    let value = |b: u8| match b {
        b'I' => 1,
        b'V' => 5,
        b'X' => 10,
        b'L' => 50,
        b'C' => 100,
        b'D' => 500,
        _ => 1000,
    };
    let bytes = surface.as_bytes();
    let mut total = 0u32;
    for (i, &b) in bytes.iter().enumerate() {
        let v = value(b);
        match bytes.get(i + 1).map(|&n| value(n)) {
            Some(next) if next > v => total = total.wrapping_sub(v),
            _ => total = total.wrapping_add(v),
        }
    }
    // Canonical spelling check: re-encode and compare.
    total > 0 && total < 4000 && to_roman(total) == surface
}

fn to_roman(mut n: u32) -> String {
    const TABLE: [(u32, &str); 13] = [
        (1000, "M"),
        (900, "CM"),
        (500, "D"),
        (400, "CD"),
        (100, "C"),
        (90, "XC"),
        (50, "L"),
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut out = String::new();
    for &(v, s) in &TABLE {
        while n >= v {
            out.push_str(s);
            n -= v;
        }
    }
    out
}
