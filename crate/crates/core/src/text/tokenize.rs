//! Offset-preserving English tokenizer.
//!
//! Tokens are byte spans into the source string. Whitespace is never part of
//! a token, every other character belongs to exactly one token:
//!
//! * runs of alphanumeric characters form one token; a hyphen between two
//!   alphanumerics (`one-hundred`, `COVID-19`) and a `.` or `,` between two
//!   digits (`3.14159`, `2,000`) continue the run;
//! * an apostrophe directly after a word that starts one of the clitics
//!   `'m 'd 's 't 've 'll 're 'ts` is split off together with the clitic;
//! * any other character is a single-character token.

/// Byte span of a token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub len: usize,
}

impl Span {
    pub fn new(start: usize, len: usize) -> Self {
        Span { start, len }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    /// Panics if the span is out of bounds or not on char boundaries.
    pub fn slice<'a>(&self, text: &'a str) -> &'a str {
        &text[self.start..self.end()]
    }
}

/// Clitic suffixes that are split off and kept as their own token.
pub const CONTRACTION_SUFFIXES: [&str; 8] = ["'m", "'d", "'s", "'t", "'ve", "'ll", "'re", "'ts"];

pub(crate) fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Lowercases and folds the typographic apostrophe onto `'`.
pub fn fold_case(s: &str) -> String {
    s.chars()
        .map(|c| if c == '\u{2019}' { '\'' } else { c })
        .flat_map(char::to_lowercase)
        .collect()
}

pub fn is_contraction_suffix(surface: &str) -> bool {
    let folded = fold_case(surface);
    CONTRACTION_SUFFIXES.contains(&folded.as_str())
}

pub fn tokenize(text: &str) -> Vec<Span> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut spans = Vec::new();
    let mut i = 0;

    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }

        if c.is_alphanumeric() {
            let mut j = i + 1;
            loop {
                match chars.get(j) {
                    Some(&(_, n)) if n.is_alphanumeric() => j += 1,
                    Some(&(_, '-')) if next_is(&chars, j + 1, char::is_alphanumeric) => j += 2,
                    Some(&(_, '.' | ','))
                        if chars[j - 1].1.is_ascii_digit()
                            && next_is(&chars, j + 1, |c| c.is_ascii_digit()) =>
                    {
                        j += 2
                    }
                    _ => break,
                }
            }
            spans.push(Span::new(start, byte_at(j) - start));
            i = j;
            continue;
        }

        if is_apostrophe(c) && i > 0 && chars[i - 1].1.is_alphanumeric() {
            if let Some(j) = clitic_end(&chars, i) {
                spans.push(Span::new(start, byte_at(j) - start));
                i = j;
                continue;
            }
        }

        spans.push(Span::new(start, c.len_utf8()));
        i += 1;
    }
    spans
}

fn next_is(chars: &[(usize, char)], j: usize, pred: impl Fn(char) -> bool) -> bool {
    chars.get(j).is_some_and(|&(_, c)| pred(c))
}

/// If an apostrophe at `i` starts a recognised clitic, the char index one
/// past the clitic.
fn clitic_end(chars: &[(usize, char)], i: usize) -> Option<usize> {
    let mut j = i + 1;
    while next_is(chars, j, char::is_alphabetic) {
        j += 1;
    }
    if j == i + 1 || next_is(chars, j, char::is_alphanumeric) {
        return None;
    }
    let suffix: String = std::iter::once('\'')
        .chain(chars[i + 1..j].iter().flat_map(|&(_, c)| c.to_lowercase()))
        .collect();
    CONTRACTION_SUFFIXES.contains(&suffix.as_str()).then_some(j)
}
