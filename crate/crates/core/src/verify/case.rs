use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// A text with a stable identity (normally its resolved path).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Arc<Self> {
        Arc::new(Document {
            id: id.into(),
            text: text.into(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Y,
    N,
}

impl Label {
    pub fn is_same_author(self) -> bool {
        self == Label::Y
    }

    pub fn from_decision(same_author: bool) -> Self {
        if same_author {
            Label::Y
        } else {
            Label::N
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Y => "Y",
            Label::N => "N",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown label {0:?} (expected Y or N)")]
pub struct UnknownLabel(pub String);

impl FromStr for Label {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, UnknownLabel> {
        match s {
            "Y" | "y" => Ok(Label::Y),
            "N" | "n" => Ok(Label::N),
            other => Err(UnknownLabel(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Test,
}

impl Partition {
    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Test => "test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown partition {0:?} (expected train or test)")]
pub struct UnknownPartition(pub String);

impl FromStr for Partition {
    type Err = UnknownPartition;

    fn from_str(s: &str) -> Result<Self, UnknownPartition> {
        match s {
            "train" => Ok(Partition::Train),
            "test" => Ok(Partition::Test),
            other => Err(UnknownPartition(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CaseError {
    #[error("case {0}: no known documents")]
    NoKnownDocuments(String),
    #[error("case {case}: unknown document {doc} also listed as known")]
    UnknownIsKnown { case: String, doc: String },
}

/// An unknown document, the known documents of one author, and optionally
/// the gold answer.
#[derive(Clone, Debug)]
pub struct VerificationCase {
    pub id: String,
    pub unknown: Arc<Document>,
    pub known: Vec<Arc<Document>>,
    pub label: Option<Label>,
    /// Author of the known documents.
    pub author: Option<String>,
}

impl VerificationCase {
    pub fn new(
        id: impl Into<String>,
        unknown: Arc<Document>,
        known: Vec<Arc<Document>>,
        label: Option<Label>,
    ) -> Result<Self, CaseError> {
        let id = id.into();
        if known.is_empty() {
            return Err(CaseError::NoKnownDocuments(id));
        }
        if known.iter().any(|k| k.id == unknown.id) {
            return Err(CaseError::UnknownIsKnown {
                case: id,
                doc: unknown.id.clone(),
            });
        }
        Ok(VerificationCase {
            id,
            unknown,
            known,
            label,
            author: None,
        })
    }

    pub fn with_author(mut self, author: impl Into<String>) -> Self {
        self.author = Some(author.into());
        self
    }

    /// D_A: the known documents joined by newlines.
    pub fn known_text(&self) -> String {
        let parts: Vec<&str> = self.known.iter().map(|d| d.text.as_str()).collect();
        parts.join("\n")
    }

    pub fn contains_document(&self, id: &str) -> bool {
        self.unknown.id == id || self.known.iter().any(|k| k.id == id)
    }
}

/// The cases of one corpus partition.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub name: String,
    pub partition: Partition,
    pub cases: Vec<VerificationCase>,
}

impl Corpus {
    pub fn new(
        name: impl Into<String>,
        partition: Partition,
        cases: Vec<VerificationCase>,
    ) -> Self {
        Corpus {
            name: name.into(),
            partition,
            cases,
        }
    }

    pub fn labels(&self) -> Vec<Option<Label>> {
        self.cases.iter().map(|c| c.label).collect()
    }

    /// Replaces every document text, keeping identities.
    pub fn map_texts<F>(&self, f: F) -> Corpus
    where
        F: Fn(&str) -> String,
    {
        let mut cache: std::collections::HashMap<String, Arc<Document>> = Default::default();
        let mut convert = |d: &Arc<Document>| -> Arc<Document> {
            cache
                .entry(d.id.clone())
                .or_insert_with(|| Document::new(d.id.clone(), f(&d.text)))
                .clone()
        };
        let cases = self
            .cases
            .iter()
            .map(|c| VerificationCase {
                id: c.id.clone(),
                unknown: convert(&c.unknown),
                known: c.known.iter().map(&mut convert).collect(),
                label: c.label,
                author: c.author.clone(),
            })
            .collect();
        Corpus::new(self.name.clone(), self.partition, cases)
    }
}

/// Documents from other cases of the same partition usable as impostors.
#[derive(Clone, Debug)]
pub struct ImpostorPool {
    pub documents: Vec<Arc<Document>>,
}

impl ImpostorPool {
    /// The known documents of every other case, minus anything belonging to
    /// the case under evaluation or written by its known author.
    pub fn for_case(corpus: &Corpus, index: usize) -> Self {
        let case = &corpus.cases[index];
        let mut seen: HashSet<&str> = HashSet::new();
        let mut documents = Vec::new();
        for (j, other) in corpus.cases.iter().enumerate() {
            if j == index || (case.author.is_some() && other.author == case.author) {
                continue;
            }
            for d in &other.known {
                if !case.contains_document(&d.id) && seen.insert(d.id.as_str()) {
                    documents.push(d.clone());
                }
            }
        }
        ImpostorPool { documents }
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(id: &str, unk: &str, known: &[&str], label: Label, author: &str) -> VerificationCase {
        VerificationCase::new(
            id,
            Document::new(unk, format!("text of {unk}")),
            known
                .iter()
                .map(|k| Document::new(*k, format!("text of {k}")))
                .collect(),
            Some(label),
        )
        .unwrap()
        .with_author(author)
    }

    #[test]
    fn rejects_empty_known_and_self_reference() {
        let u = Document::new("u", "x");
        assert!(matches!(
            VerificationCase::new("c", u.clone(), vec![], None),
            Err(CaseError::NoKnownDocuments(_))
        ));
        assert!(matches!(
            VerificationCase::new("c", u.clone(), vec![u], None),
            Err(CaseError::UnknownIsKnown { .. })
        ));
    }

    #[test]
    fn known_text_joins_with_newline() {
        let c = case("c", "u", &["a", "b"], Label::Y, "x");
        assert_eq!(c.known_text(), "text of a\ntext of b");
    }

    #[test]
    fn pool_excludes_own_documents_and_same_author() {
        let corpus = Corpus::new(
            "t",
            Partition::Test,
            vec![
                case("c1", "u1", &["a1"], Label::Y, "alice"),
                case("c2", "u2", &["a1b"], Label::N, "alice"),
                case("c3", "u3", &["b1", "u1"], Label::Y, "bob"),
                case("c4", "u4", &["c1"], Label::N, "carol"),
            ],
        );
        let pool = ImpostorPool::for_case(&corpus, 0);
        let ids: Vec<&str> = pool.documents.iter().map(|d| d.id.as_str()).collect();
        // a1b is alice's, u1 is the case's own unknown
        assert_eq!(ids, vec!["b1", "c1"]);
        for (i, c) in corpus.cases.iter().enumerate() {
            let p = ImpostorPool::for_case(&corpus, i);
            assert!(p.documents.iter().all(|d| !c.contains_document(&d.id)));
        }
    }

    #[test]
    fn label_and_partition_parse() {
        assert_eq!("Y".parse::<Label>(), Ok(Label::Y));
        assert!("maybe".parse::<Label>().is_err());
        assert_eq!("train".parse::<Partition>(), Ok(Partition::Train));
        assert!("dev".parse::<Partition>().is_err());
    }
}
