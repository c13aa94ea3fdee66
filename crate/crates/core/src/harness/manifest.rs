//! Case manifests: one case per line,
//! `case_id<TAB>label<TAB>unknown_path<TAB>known_path[;known_path…][<TAB>author_id]`.
//! Blank lines and lines starting with `#` are skipped; relative paths are
//! resolved against the manifest's directory. A label of `?` marks an
//! unlabelled case.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::verify::{CaseError, Corpus, Document, Label, Partition, VerificationCase};

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("manifest line {line}: duplicate case id {id}")]
    DuplicateCaseId { line: usize, id: String },
    #[error("case {case}: cannot read {path}: {source}")]
    MissingFile {
        case: String,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Case(#[from] CaseError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub line: usize,
    pub case_id: String,
    pub label: Option<Label>,
    pub unknown: PathBuf,
    pub known: Vec<PathBuf>,
    pub author: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusManifest {
    pub name: String,
    pub partition: Partition,
    pub entries: Vec<ManifestEntry>,
}

fn malformed(line: usize, reason: impl Into<String>) -> ManifestError {
    ManifestError::Malformed {
        line,
        reason: reason.into(),
    }
}

impl CorpusManifest {
    pub fn parse(
        text: &str,
        base: &Path,
        name: impl Into<String>,
        partition: Partition,
    ) -> Result<Self, ManifestError> {
        let mut entries = Vec::new();
        let mut ids = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.strip_suffix('\r').unwrap_or(raw);
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if !(4..=5).contains(&cols.len()) {
                return Err(malformed(
                    line,
                    format!("expected 4 or 5 tab-separated fields, found {}", cols.len()),
                ));
            }
            let case_id = cols[0].trim();
            if case_id.is_empty() {
                return Err(malformed(line, "empty case id"));
            }
            let label = match cols[1].trim() {
                "?" => None,
                l => Some(
                    l.parse::<Label>()
                        .map_err(|e| malformed(line, e.to_string()))?,
                ),
            };
            if cols[2].trim().is_empty() {
                return Err(malformed(line, "empty unknown path"));
            }
            let known: Vec<PathBuf> = cols[3]
                .split(';')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| base.join(p))
                .collect();
            if known.is_empty() {
                return Err(malformed(line, "no known documents"));
            }
            let author = cols
                .get(4)
                .map(|a| a.trim())
                .filter(|a| !a.is_empty())
                .map(str::to_string);
            if !ids.insert(case_id.to_string()) {
                return Err(ManifestError::DuplicateCaseId {
                    line,
                    id: case_id.to_string(),
                });
            }
            entries.push(ManifestEntry {
                line,
                case_id: case_id.to_string(),
                label,
                unknown: base.join(cols[2].trim()),
                known,
                author,
            });
        }
        Ok(CorpusManifest {
            name: name.into(),
            partition,
            entries,
        })
    }

    /// Reads a manifest file; the corpus is named after the file stem.
    pub fn load(path: &Path, partition: Partition) -> Result<Self, ManifestError> {
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let name = path.file_stem().map_or_else(
            || "corpus".to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        Self::parse(&text, base, name, partition)
    }

    /// Reads every referenced file. Documents are read verbatim and shared
    /// between cases that reference the same path.
    pub fn load_corpus(&self) -> Result<Corpus, ManifestError> {
        let mut docs: HashMap<PathBuf, Arc<Document>> = HashMap::new();
        let mut read = |case: &str, p: &Path| -> Result<Arc<Document>, ManifestError> {
            if let Some(d) = docs.get(p) {
                return Ok(d.clone());
            }
            let bytes = std::fs::read(p).map_err(|source| ManifestError::MissingFile {
                case: case.to_string(),
                path: p.to_path_buf(),
                source,
            })?;
            let d = Document::new(
                p.display().to_string(),
                String::from_utf8_lossy(&bytes).into_owned(),
            );
            docs.insert(p.to_path_buf(), d.clone());
            Ok(d)
        };
        let mut cases = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let unknown = read(&e.case_id, &e.unknown)?;
            let known = e
                .known
                .iter()
                .map(|p| read(&e.case_id, p))
                .collect::<Result<Vec<_>, _>>()?;
            let mut case = VerificationCase::new(e.case_id.clone(), unknown, known, e.label)?;
            case.author = e.author.clone();
            cases.push(case);
        }
        Ok(Corpus::new(self.name.clone(), self.partition, cases))
    }
}

/// A problem found by [`validate_corpus`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Imbalance {
        same_author: usize,
        different_author: usize,
    },
    Unlabelled {
        case: String,
    },
    DuplicateDocument {
        case: String,
        path: PathBuf,
    },
    UnknownAmongKnown {
        case: String,
        path: PathBuf,
    },
    AuthorOverlap {
        author: String,
        other: String,
    },
    MissingFile {
        case: String,
        path: PathBuf,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Imbalance {
                same_author,
                different_author,
            } => write!(
                f,
                "imbalanced labels: {same_author} Y vs {different_author} N"
            ),
            Violation::Unlabelled { case } => write!(f, "case {case}: no label"),
            Violation::DuplicateDocument { case, path } => {
                write!(f, "case {case}: {} listed more than once", path.display())
            }
            Violation::UnknownAmongKnown { case, path } => {
                write!(
                    f,
                    "case {case}: unknown document {} is also a known document",
                    path.display()
                )
            }
            Violation::AuthorOverlap { author, other } => {
                write!(f, "author {author} also appears in {other}")
            }
            Violation::MissingFile { case, path } => {
                write!(f, "case {case}: missing file {}", path.display())
            }
        }
    }
}

/// Checks label balance, per-case document hygiene, file existence, and
/// author disjointness against the manifests of other partitions.
pub fn validate_corpus(manifest: &CorpusManifest, others: &[&CorpusManifest]) -> Vec<Violation> {
    let mut out = Vec::new();
    let (mut y, mut n) = (0, 0);
    for e in &manifest.entries {
        match e.label {
            Some(Label::Y) => y += 1,
            Some(Label::N) => n += 1,
            None => out.push(Violation::Unlabelled {
                case: e.case_id.clone(),
            }),
        }
    }
    if y != n {
        out.push(Violation::Imbalance {
            same_author: y,
            different_author: n,
        });
    }
    for e in &manifest.entries {
        let mut seen = HashSet::new();
        for k in &e.known {
            if k == &e.unknown {
                out.push(Violation::UnknownAmongKnown {
                    case: e.case_id.clone(),
                    path: k.clone(),
                });
            } else if !seen.insert(k) {
                out.push(Violation::DuplicateDocument {
                    case: e.case_id.clone(),
                    path: k.clone(),
                });
            }
        }
        for p in std::iter::once(&e.unknown).chain(&e.known) {
            if !p.is_file() {
                out.push(Violation::MissingFile {
                    case: e.case_id.clone(),
                    path: p.clone(),
                });
            }
        }
    }
    let mine: HashSet<&str> = manifest
        .entries
        .iter()
        .filter_map(|e| e.author.as_deref())
        .collect();
    let mut overlaps: Vec<(String, String)> = Vec::new();
    for other in others {
        let theirs: HashSet<&str> = other
            .entries
            .iter()
            .filter_map(|e| e.author.as_deref())
            .collect();
        for a in mine.intersection(&theirs) {
            overlaps.push((
                a.to_string(),
                format!("{} ({})", other.name, other.partition),
            ));
        }
    }
    overlaps.sort();
    out.extend(
        overlaps
            .into_iter()
            .map(|(author, other)| Violation::AuthorOverlap { author, other }),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) {
        std::fs::write(dir.join(name), text).unwrap();
    }

    fn corpus_dir() -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        for f in ["u1", "u2", "u3", "u4", "k1", "k2", "k3"] {
            write(dir.path(), &format!("{f}.txt"), &format!("contents of {f}"));
        }
        dir
    }

    const BALANCED: &str = "# id\tlabel\tunknown\tknown\tauthor\n\
        c1\tY\tu1.txt\tk1.txt\talice\n\
        c2\tN\tu2.txt\tk1.txt\talice\n\
        c3\tY\tu3.txt\tk2.txt;k3.txt\tbob\n\
        c4\tN\tu4.txt\tk2.txt;k3.txt\tbob\n";

    #[test]
    fn parses_and_loads() {
        let dir = corpus_dir();
        let m = CorpusManifest::parse(BALANCED, dir.path(), "toy", Partition::Train).unwrap();
        assert_eq!(m.entries.len(), 4);
        assert_eq!(m.entries[2].known.len(), 2);
        assert_eq!(m.entries[0].author.as_deref(), Some("alice"));
        assert!(validate_corpus(&m, &[]).is_empty());
        let corpus = m.load_corpus().unwrap();
        assert_eq!(
            corpus.cases[2].known_text(),
            "contents of k2\ncontents of k3"
        );
        assert!(Arc::ptr_eq(
            &corpus.cases[0].known[0],
            &corpus.cases[1].known[0]
        ));
    }

    #[test]
    fn imbalance_is_reported() {
        let dir = corpus_dir();
        let text = BALANCED.replace("c2\tN", "c2\tY");
        let m = CorpusManifest::parse(&text, dir.path(), "toy", Partition::Train).unwrap();
        assert_eq!(
            validate_corpus(&m, &[]),
            vec![Violation::Imbalance {
                same_author: 3,
                different_author: 1
            }]
        );
    }

    #[test]
    fn cross_partition_author_overlap() {
        let dir = corpus_dir();
        let train = CorpusManifest::parse(BALANCED, dir.path(), "toy", Partition::Train).unwrap();
        let test = CorpusManifest::parse(
            "t1\tY\tu1.txt\tk2.txt\tbob\nt2\tN\tu2.txt\tk3.txt\tcarol\n",
            dir.path(),
            "toy",
            Partition::Test,
        )
        .unwrap();
        let v = validate_corpus(&test, &[&train]);
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::AuthorOverlap { author, .. } if author == "bob"));
    }

    #[test]
    fn missing_file_and_duplicates() {
        let dir = corpus_dir();
        let m = CorpusManifest::parse(
            "c1\tY\tu1.txt\tk1.txt;k1.txt;u1.txt\nc2\tN\tgone.txt\tk2.txt\n",
            dir.path(),
            "toy",
            Partition::Test,
        )
        .unwrap();
        let v = validate_corpus(&m, &[]);
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::DuplicateDocument { .. })));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::UnknownAmongKnown { .. })));
        assert!(v.iter().any(
            |x| matches!(x, Violation::MissingFile { path, .. } if path.ends_with("gone.txt"))
        ));
        let err = m.load_corpus().unwrap_err();
        assert!(matches!(
            err,
            ManifestError::Case(_) | ManifestError::MissingFile { .. }
        ));
    }

    #[test]
    fn malformed_lines() {
        let base = Path::new(".");
        for bad in [
            "c1\tY\tu",
            "c1\tmaybe\tu\tk",
            "\tY\tu\tk",
            "c1\tY\tu\t ; ",
            "c\tY\tu\tk\nc\tN\tu\tk",
        ] {
            assert!(
                CorpusManifest::parse(bad, base, "x", Partition::Test).is_err(),
                "{bad:?}"
            );
        }
        let m = CorpusManifest::parse("c1\t?\tu\tk\r\n", base, "x", Partition::Test).unwrap();
        assert_eq!(m.entries[0].label, None);
    }
}
