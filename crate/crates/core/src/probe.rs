//! Topic-leakage probe: how well a bag-of-tokens logistic regression recovers
//! topic labels from a (masked) corpus, and which content tokens survive.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::lexicon::PatternLexicon;
use crate::linear::{stratified_folds, SoftmaxRegression, SparseRow, TrainParams};
use crate::posnoise::is_mask_symbol;
use crate::text::{fold_case, tokenize};
use crate::verify::word_tokens;

#[derive(Debug, thiserror::Error)]
pub enum ProbeError {
    #[error("class {label} has {count} documents, fewer than {folds} folds")]
    ClassTooSmall {
        label: String,
        count: usize,
        folds: usize,
    },
    #[error("topic corpus needs at least two labels, found {0}")]
    TooFewClasses(usize),
    #[error("no feature token occurs in the corpus")]
    EmptyFeatureSet,
    #[error("folds must be at least 2, got {0}")]
    TooFewFolds(usize),
    #[error("no verification results for representation {0}")]
    MissingRepresentation(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("topic manifest line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// Labelled documents; labels are indexed in sorted order.
#[derive(Clone, Debug)]
pub struct TopicCorpus {
    texts: Vec<String>,
    labels: Vec<usize>,
    names: Vec<String>,
}

impl TopicCorpus {
    pub fn new<S: Into<String>, L: AsRef<str>>(docs: Vec<(S, L)>) -> Result<Self, ProbeError> {
        let names: Vec<String> = docs
            .iter()
            .map(|(_, l)| l.as_ref().to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if names.len() < 2 {
            return Err(ProbeError::TooFewClasses(names.len()));
        }
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let labels = docs.iter().map(|(_, l)| index[l.as_ref()]).collect();
        let texts = docs.into_iter().map(|(t, _)| t.into()).collect();
        Ok(TopicCorpus {
            texts,
            labels,
            names,
        })
    }

    fn read(path: &Path) -> Result<String, ProbeError> {
        std::fs::read(path)
            .map(|b| String::from_utf8_lossy(&b).into_owned())
            .map_err(|source| ProbeError::Io {
                path: path.to_path_buf(),
                source,
            })
    }

    /// One sub-directory per label holding `.txt` files.
    pub fn from_dir(dir: &Path) -> Result<Self, ProbeError> {
        let io = |source| ProbeError::Io {
            path: dir.to_path_buf(),
            source,
        };
        let mut classes: Vec<PathBuf> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir())
            .collect();
        classes.sort();
        let mut docs = Vec::new();
        for class in classes {
            let label = class
                .file_name()
                .unwrap_or_default()
                .to_string_lossy()
                .into_owned();
            let mut files: Vec<PathBuf> = std::fs::read_dir(&class)
                .map_err(|source| ProbeError::Io {
                    path: class.clone(),
                    source,
                })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "txt"))
                .collect();
            files.sort();
            for f in files {
                docs.push((Self::read(&f)?, label.clone()));
            }
        }
        Self::new(docs)
    }

    /// Lines of `path<TAB>label`, paths relative to the manifest.
    pub fn from_manifest(path: &Path) -> Result<Self, ProbeError> {
        let text = Self::read(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut docs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((p, label)) = line.split_once('\t') else {
                return Err(ProbeError::Malformed {
                    line: line_no,
                    reason: "expected path<TAB>label".into(),
                });
            };
            if label.trim().is_empty() || label.contains('\t') {
                return Err(ProbeError::Malformed {
                    line: line_no,
                    reason: "expected a single non-empty label".into(),
                });
            }
            docs.push((Self::read(&base.join(p.trim()))?, label.trim().to_string()));
        }
        Self::new(docs)
    }

    /// A directory is read per class, anything else as a manifest.
    pub fn load(path: &Path) -> Result<Self, ProbeError> {
        if path.is_dir() {
            Self::from_dir(path)
        } else {
            Self::from_manifest(path)
        }
    }

    pub fn len(&self) -> usize {
        self.texts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.texts.is_empty()
    }

    pub fn texts(&self) -> &[String] {
        &self.texts
    }

    pub fn label_names(&self) -> &[String] {
        &self.names
    }

    /// Label of each document.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(|&l| self.names[l].as_str())
    }

    /// The same corpus with every text transformed.
    pub fn map_texts<F: Fn(&str) -> String + Sync>(&self, f: F) -> Self {
        TopicCorpus {
            texts: self.texts.par_iter().map(|t| f(t)).collect(),
            labels: self.labels.clone(),
            names: self.names.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeResult {
    pub representation: String,
    pub fold_accuracies: Vec<f64>,
    pub mean_accuracy: f64,
}

const PROBE_TRAINING: TrainParams = TrainParams {
    iterations: 500,
    l2: 1.0,
};

fn probe_with<F>(
    corpus: &TopicCorpus,
    folds: usize,
    seed: u64,
    keep: F,
    representation: &str,
) -> Result<ProbeResult, ProbeError>
where
    F: Fn(&str) -> bool,
{
    if folds < 2 {
        return Err(ProbeError::TooFewFolds(folds));
    }
    for (c, name) in corpus.names.iter().enumerate() {
        let count = corpus.labels.iter().filter(|&&l| l == c).count();
        if count < folds {
            return Err(ProbeError::ClassTooSmall {
                label: name.clone(),
                count,
                folds,
            });
        }
    }
    let tokenized: Vec<Vec<String>> = corpus.texts.par_iter().map(|t| word_tokens(t)).collect();
    let vocab: BTreeSet<&str> = tokenized
        .iter()
        .flatten()
        .map(String::as_str)
        .filter(|t| keep(t))
        .collect();
    if vocab.is_empty() {
        return Err(ProbeError::EmptyFeatureSet);
    }
    let index: HashMap<&str, usize> = vocab.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let rows: Vec<SparseRow> = tokenized
        .iter()
        .map(|toks| {
            let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
            for t in toks {
                if let Some(&j) = index.get(t.as_str()) {
                    *counts.entry(j).or_default() += 1.0;
                }
            }
            SparseRow(counts.into_iter().collect())
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assignment = stratified_folds(&corpus.labels, folds, &mut rng);
    let classes = corpus.names.len();
    let fold_accuracies: Vec<f64> = (0..folds)
        .into_par_iter()
        .map(|f| {
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for (i, r) in rows.iter().enumerate() {
                if assignment[i] != f {
                    xs.push(r.clone());
                    ys.push(corpus.labels[i]);
                }
            }
            let model = SoftmaxRegression::fit_rows(&xs, vocab.len(), &ys, classes, PROBE_TRAINING);
            let test: Vec<usize> = (0..rows.len()).filter(|&i| assignment[i] == f).collect();
            let correct = test
                .iter()
                .filter(|&&i| model.predict_row(&rows[i]) == corpus.labels[i])
                .count();
            correct as f64 / test.len() as f64
        })
        .collect();
    let mean_accuracy = fold_accuracies.iter().sum::<f64>() / folds as f64;
    Ok(ProbeResult {
        representation: representation.to_string(),
        fold_accuracies,
        mean_accuracy,
    })
}

/// Stratified k-fold accuracy of a multinomial logistic regression over
/// lower-cased token counts.
pub fn probe_topic(
    corpus: &TopicCorpus,
    folds: usize,
    seed: u64,
    representation: &str,
) -> Result<ProbeResult, ProbeError> {
    probe_with(corpus, folds, seed, |_| true, representation)
}

/// As [`probe_topic`], with features restricted to single-token entries of
/// the lexicon vocabulary.
pub fn probe_function_words_only(
    corpus: &TopicCorpus,
    lex: &PatternLexicon,
    folds: usize,
    seed: u64,
    representation: &str,
) -> Result<ProbeResult, ProbeError> {
    probe_with(
        corpus,
        folds,
        seed,
        |t| lex.contains_token(t),
        representation,
    )
}

fn is_punctuation(token: &str) -> bool {
    !token.chars().any(char::is_alphanumeric)
}

/// Token counts (lower-cased) of everything that is not lexicon vocabulary, a
/// mask symbol or pure punctuation; most frequent first, ties alphabetical.
pub fn residual_tokens<S: AsRef<str>>(docs: &[S], lex: &PatternLexicon) -> Vec<(String, usize)> {
    let mut counts: HashMap<String, usize> = HashMap::new();
    for d in docs {
        let text = d.as_ref();
        for span in tokenize(text) {
            let surface = span.slice(text);
            if is_mask_symbol(surface) || is_punctuation(surface) {
                continue;
            }
            let t = fold_case(surface);
            if !lex.contains_token(&t) {
                *counts.entry(t).or_default() += 1;
            }
        }
    }
    let mut table: Vec<(String, usize)> = counts.into_iter().collect();
    table.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    table
}

pub fn residual_tsv(table: &[(String, usize)]) -> String {
    let mut out = String::from("token\tcount\n");
    for (t, c) in table {
        writeln!(out, "{t}\t{c}").unwrap();
    }
    out
}

/// Median; the mean of the two middle values for an even count.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    })
}

/// `representation topic_accuracy median_av_accuracy`, one row per probe
/// result, joining on representation with the verification accuracies
/// `(representation, accuracy)`.
pub fn tradeoff_table(
    av_accuracies: &[(String, f64)],
    probes: &[ProbeResult],
) -> Result<String, ProbeError> {
    let mut out = String::from("representation\ttopic_accuracy\tmedian_av_accuracy\n");
    for p in probes {
        let accs: Vec<f64> = av_accuracies
            .iter()
            .filter(|(r, _)| *r == p.representation)
            .map(|(_, a)| *a)
            .collect();
        let med = median(&accs)
            .ok_or_else(|| ProbeError::MissingRepresentation(p.representation.clone()))?;
        writeln!(
            out,
            "{}\t{:.4}\t{:.4}",
            p.representation, p.mean_accuracy, med
        )
        .unwrap();
    }
    Ok(out)
}
