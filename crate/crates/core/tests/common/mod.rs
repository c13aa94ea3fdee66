//! Seeded synthetic corpora shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use posnoise::text::Upos;
use posnoise::verify::{Corpus, Document, Label, Partition, VerificationCase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

const VOWELS: &[u8] = b"aeiou";
const CONSONANTS: &[u8] = b"bcdfghjklmnpqrstvwxz";

/// Writing style of a synthetic author.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    VowelHeavy,
    ConsonantHeavy,
}

impl Style {
    pub fn name(self) -> &'static str {
        match self {
            Style::VowelHeavy => "vowel",
            Style::ConsonantHeavy => "consonant",
        }
    }

    fn vowel_share(self) -> f64 {
        match self {
            Style::VowelHeavy => 0.7,
            Style::ConsonantHeavy => 0.25,
        }
    }

    /// The author's private vocabulary, fixed per style.
    fn vocabulary(self) -> Vec<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(match self {
            Style::VowelHeavy => 101,
            Style::ConsonantHeavy => 202,
        });
        (0..80)
            .map(|_| {
                let len = rng.random_range(2..8);
                (0..len)
                    .map(|_| {
                        let pool = if rng.random_bool(self.vowel_share()) {
                            VOWELS
                        } else {
                            CONSONANTS
                        };
                        pool[rng.random_range(0..pool.len())] as char
                    })
                    .collect()
            })
            .collect()
    }
}

/// About `words` words drawn Zipf-like from the author's vocabulary, with
/// sentence punctuation.
pub fn author_text(style: Style, seed: u64, words: usize) -> String {
    let vocab = style.vocabulary();
    let weights: Vec<f64> = (1..=vocab.len()).map(|r| 1.0 / r as f64).collect();
    let total: f64 = weights.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for i in 0..words {
        let mut x = rng.random::<f64>() * total;
        let mut idx = 0;
        while idx + 1 < vocab.len() && x >= weights[idx] {
            x -= weights[idx];
            idx += 1;
        }
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&vocab[idx]);
        if rng.random_range(0..10) == 0 {
            out.push('.');
        }
    }
    out.push('.');
    out
}

/// Twenty balanced cases over two authors: per author five same-author
/// cases and five cases whose unknown text is by the other author.
pub fn smoke_corpus(partition: Partition, seed: u64) -> Corpus {
    let mut next = seed * 1000;
    let mut doc = |style: Style| {
        next += 1;
        Document::new(
            format!("{partition}/{}-{next}", style.name()),
            author_text(style, next, 220),
        )
    };
    let mut cases = Vec::new();
    for author in [Style::VowelHeavy, Style::ConsonantHeavy] {
        let other = match author {
            Style::VowelHeavy => Style::ConsonantHeavy,
            Style::ConsonantHeavy => Style::VowelHeavy,
        };
        for i in 0..5 {
            for (label, unk_style) in [(Label::Y, author), (Label::N, other)] {
                let id = format!("{}-{}-{i}", author.name(), label);
                let case =
                    VerificationCase::new(id, doc(unk_style), vec![doc(author)], Some(label))
                        .expect("distinct documents")
                        .with_author(author.name());
                cases.push(case);
            }
        }
    }
    Corpus::new(format!("smoke-{partition}"), partition, cases)
}

/// Balanced corpus whose cases each have exactly one known document.
pub fn single_known_corpus(cases: usize) -> Corpus {
    let mut out = Vec::new();
    for i in 0..cases {
        let label = if i % 2 == 0 { Label::Y } else { Label::N };
        let unk_style = if label == Label::Y {
            Style::VowelHeavy
        } else {
            Style::ConsonantHeavy
        };
        out.push(
            VerificationCase::new(
                format!("c{i}"),
                Document::new(format!("u{i}"), author_text(unk_style, 500 + i as u64, 60)),
                vec![Document::new(
                    format!("k{i}"),
                    author_text(Style::VowelHeavy, 900 + i as u64, 60),
                )],
                Some(label),
            )
            .unwrap(),
        );
    }
    Corpus::new("single-known", Partition::Test, out)
}

pub const TOPICS: [&str; 3] = ["cooking", "sailing", "astronomy"];

fn topic_words(topic: &str) -> (&'static [&'static str], &'static [&'static str]) {
    match topic {
        "cooking" => (
            &[
                "onion", "pan", "oven", "sauce", "garlic", "butter", "recipe", "kitchen",
            ],
            &[
                "fried", "baked", "stirred", "chopped", "roasted", "seasoned",
            ],
        ),
        "sailing" => (
            &[
                "boat", "sail", "harbour", "mast", "anchor", "rope", "wind", "deck",
            ],
            &["rowed", "moored", "steered", "hoisted", "tacked", "drifted"],
        ),
        _ => (
            &[
                "telescope",
                "planet",
                "comet",
                "galaxy",
                "orbit",
                "nebula",
                "moon",
                "star",
            ],
            &[
                "observed",
                "charted",
                "tracked",
                "measured",
                "spotted",
                "photographed",
            ],
        ),
    }
}

const ADJECTIVES: [&str; 6] = ["big", "small", "old", "new", "bright", "quiet"];

/// Gold-tagged documents for a three-topic corpus. Topics differ only in
/// their nouns and verbs; function words and adjectives are shared.
pub fn topic_documents(per_topic: usize, seed: u64) -> Vec<(Vec<(String, Upos)>, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    for topic in TOPICS {
        let (nouns, verbs) = topic_words(topic);
        for _ in 0..per_topic {
            let mut toks: Vec<(String, Upos)> = Vec::new();
            let pick = |list: &[&str], rng: &mut ChaCha8Rng| {
                list[rng.random_range(0..list.len())].to_string()
            };
            for _ in 0..6 {
                let template = rng.random_range(0..3);
                let mut push = |s: String, t: Upos| toks.push((s, t));
                match template {
                    0 => {
                        push("The".into(), Upos::Det);
                        push(pick(&ADJECTIVES, &mut rng), Upos::Adj);
                        push(pick(nouns, &mut rng), Upos::Noun);
                        push(pick(verbs, &mut rng), Upos::Verb);
                        push("the".into(), Upos::Det);
                        push(pick(nouns, &mut rng), Upos::Noun);
                    }
                    1 => {
                        push("In".into(), Upos::Adp);
                        push("the".into(), Upos::Det);
                        push(pick(nouns, &mut rng), Upos::Noun);
                        push("we".into(), Upos::Pron);
                        push(pick(verbs, &mut rng), Upos::Verb);
                        push("a".into(), Upos::Det);
                        push(pick(&ADJECTIVES, &mut rng), Upos::Adj);
                        push(pick(nouns, &mut rng), Upos::Noun);
                    }
                    _ => {
                        push("They".into(), Upos::Pron);
                        push(pick(verbs, &mut rng), Upos::Verb);
                        push("it".into(), Upos::Pron);
                        push("with".into(), Upos::Adp);
                        push("their".into(), Upos::Pron);
                        push(pick(nouns, &mut rng), Upos::Noun);
                    }
                }
                push(".".into(), Upos::Punct);
            }
            docs.push((toks, topic.to_string()));
        }
    }
    docs
}

pub fn join_tokens(tokens: &[(String, Upos)]) -> String {
    tokens
        .iter()
        .map(|(s, _)| s.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}
