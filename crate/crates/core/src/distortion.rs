//! TextDistortion masking (single- and multiple-asterisk variants) and the
//! style/topic analysis used to pick the word-list cut-off `k`.
//!
//! A word is a maximal run of alphabetic characters, so an apostrophe
//! separates two words (`I'd` masks to `*'*`). Digits are masked
//! independently of the word list.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::text::fold_case;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordListError {
    #[error("word list is empty")]
    Empty,
    #[error("line {line}: duplicate word `{word}`")]
    Duplicate { line: usize, word: String },
    #[error("line {line}: expected a single word, found {found:?}")]
    NotAWord { line: usize, found: String },
    #[error("k = {k} outside 1..={len}")]
    InvalidK { k: usize, len: usize },
    #[error("line {line}: unknown label `{label}` (expected style or topic)")]
    UnknownLabel { line: usize, label: String },
    #[error("annotation has {found} labels for a word list of {expected} words")]
    Misaligned { expected: usize, found: usize },
    #[error("line {line}: annotation word `{found}` does not match word list entry `{expected}`")]
    WordMismatch {
        line: usize,
        expected: String,
        found: String,
    },
}

/// Frequency-ranked word list with an active prefix of length `k`.
#[derive(Clone, Debug)]
pub struct FrequencyWordList {
    words: Vec<String>,
    k: usize,
    active: HashSet<String>,
}

impl FrequencyWordList {
    /// Parses one word per line, most frequent first. `k` starts at the full length.
    pub fn parse(text: &str) -> Result<Self, WordListError> {
        let mut words = Vec::new();
        let mut seen = HashSet::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            // `rank<TAB>word` and `word<TAB>freq` lines: the alphabetic field
            let word = line
                .split_whitespace()
                .find(|f| f.chars().any(char::is_alphabetic))
                .ok_or_else(|| WordListError::NotAWord {
                    line: idx + 1,
                    found: line.to_string(),
                })?;
            let word = fold_case(word);
            if !seen.insert(word.clone()) {
                return Err(WordListError::Duplicate {
                    line: idx + 1,
                    word,
                });
            }
            words.push(word);
        }
        Self::new(words)
    }

    pub fn new(words: Vec<String>) -> Result<Self, WordListError> {
        if words.is_empty() {
            return Err(WordListError::Empty);
        }
        let mut list = FrequencyWordList {
            k: 0,
            words: words.into_iter().map(|w| fold_case(&w)).collect(),
            active: HashSet::new(),
        };
        let len = list.words.len();
        list.set_k(len)?;
        Ok(list)
    }

    pub fn with_k(mut self, k: usize) -> Result<Self, WordListError> {
        self.set_k(k)?;
        Ok(self)
    }

    pub fn set_k(&mut self, k: usize) -> Result<(), WordListError> {
        if k == 0 || k > self.words.len() {
            return Err(WordListError::InvalidK {
                k,
                len: self.words.len(),
            });
        }
        self.k = k;
        self.active = self.words[..k].iter().cloned().collect();
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Whether `word` is among the first `k` entries (case-insensitive).
    pub fn retains(&self, word: &str) -> bool {
        self.active.contains(&fold_case(word))
    }
}

#[derive(Clone, Copy)]
enum Variant {
    SingleAsterisk,
    MultipleAsterisks,
}

fn distort(text: &str, wl: &FrequencyWordList, variant: Variant) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if c.is_alphabetic() {
            let end = rest
                .find(|ch: char| !ch.is_alphabetic())
                .unwrap_or(rest.len());
            let word = &rest[..end];
            if wl.retains(word) {
                out.push_str(word);
            } else {
                match variant {
                    Variant::SingleAsterisk => out.push('*'),
                    Variant::MultipleAsterisks => {
                        out.extend(std::iter::repeat_n('*', word.chars().count()))
                    }
                }
            }
            rest = &rest[end..];
        } else if c.is_numeric() {
            let end = rest.find(|ch: char| !ch.is_numeric()).unwrap_or(rest.len());
            match variant {
                Variant::SingleAsterisk => out.push('#'),
                Variant::MultipleAsterisks => {
                    out.extend(std::iter::repeat_n('#', rest[..end].chars().count()))
                }
            }
            rest = &rest[end..];
        } else {
            out.push(c);
            rest = &rest[c.len_utf8()..];
        }
    }
    out
}

/// DV-SA: each masked word becomes `*`, each digit run `#`.
pub fn dvsa_mask(text: &str, wl: &FrequencyWordList) -> String {
    distort(text, wl, Variant::SingleAsterisk)
}

/// DV-MA: each character of a masked word becomes `*`, each digit `#`.
pub fn dvma_mask(text: &str, wl: &FrequencyWordList) -> String {
    distort(text, wl, Variant::MultipleAsterisks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordRole {
    Style,
    Topic,
}

/// Style/topic labels aligned with a word list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StyleTopicAnnotation {
    labels: Vec<WordRole>,
}

impl StyleTopicAnnotation {
    pub fn new(labels: Vec<WordRole>) -> Self {
        StyleTopicAnnotation { labels }
    }

    /// Parses one label per line, either `label` or `word<TAB>label`. When
    /// a word list is given, words (if present) must match it rank for rank.
    pub fn parse(text: &str, wl: Option<&FrequencyWordList>) -> Result<Self, WordListError> {
        let mut labels = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let (word, label) = match fields.as_slice() {
                [label] => (None, *label),
                [word, label] => (Some(*word), *label),
                _ => {
                    return Err(WordListError::NotAWord {
                        line: idx + 1,
                        found: line.to_string(),
                    })
                }
            };
            let role = match label.to_ascii_lowercase().as_str() {
                "style" | "s" => WordRole::Style,
                "topic" | "t" => WordRole::Topic,
                _ => {
                    return Err(WordListError::UnknownLabel {
                        line: idx + 1,
                        label: label.to_string(),
                    })
                }
            };
            if let (Some(word), Some(wl)) = (word, wl) {
                let expected = wl
                    .words()
                    .get(labels.len())
                    .map(String::as_str)
                    .unwrap_or("");
                if fold_case(word) != expected {
                    return Err(WordListError::WordMismatch {
                        line: idx + 1,
                        expected: expected.to_string(),
                        found: word.to_string(),
                    });
                }
            }
            labels.push(role);
        }
        if let Some(wl) = wl {
            if labels.len() != wl.len() {
                return Err(WordListError::Misaligned {
                    expected: wl.len(),
                    found: labels.len(),
                });
            }
        }
        Ok(StyleTopicAnnotation { labels })
    }

    pub fn labels(&self) -> &[WordRole] {
        &self.labels
    }
}

/// One row of the cumulative style/topic curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KCurveRow {
    pub k: usize,
    pub cum_style: usize,
    pub cum_topic: usize,
}

impl KCurveRow {
    pub fn diff(&self) -> i64 {
        self.cum_style as i64 - self.cum_topic as i64
    }
}

pub fn k_curve(ann: &StyleTopicAnnotation) -> Vec<KCurveRow> {
    let (mut style, mut topic) = (0, 0);
    ann.labels
        .iter()
        .enumerate()
        .map(|(i, role)| {
            match role {
                WordRole::Style => style += 1,
                WordRole::Topic => topic += 1,
            }
            KCurveRow {
                k: i + 1,
                cum_style: style,
                cum_topic: topic,
            }
        })
        .collect()
}

/// The `k` at which style words outnumber topic words the most; the first
/// such `k` on ties. `None` for an empty annotation.
pub fn choose_k(ann: &StyleTopicAnnotation) -> Option<usize> {
    let mut best: Option<KCurveRow> = None;
    for row in k_curve(ann) {
        if best.is_none_or(|b| row.diff() > b.diff()) {
            best = Some(row);
        }
    }
    best.map(|r| r.k)
}

/// TSV with header `k cum_style cum_topic diff`.
pub fn k_curve_tsv(rows: &[KCurveRow]) -> String {
    let mut out = String::from("k\tcum_style\tcum_topic\tdiff\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            r.k,
            r.cum_style,
            r.cum_topic,
            r.diff()
        );
    }
    out
}
