use std::fmt::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::metrics::{accuracy, auc};
use crate::verify::{CaseScore, Corpus, Label, Method, Partition, VerifierConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub case_id: String,
    pub raw: f64,
    pub similarity: f64,
    pub decision: Label,
    pub label: Option<Label>,
}

/// Per-case outcomes of one run, their metrics, and a fingerprint of
/// everything that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub method: Method,
    pub corpus: String,
    pub partition: Partition,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
    pub accuracy: Option<f64>,
    pub auc: Option<f64>,
    pub fingerprint: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 over case ids, labels and document texts. Paths are left out so
/// the same corpus digests equally wherever it lives.
pub fn corpus_digest(corpus: &Corpus) -> String {
    let mut h = Sha256::new();
    let mut field = |bytes: &[u8]| {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    };
    for c in &corpus.cases {
        field(c.id.as_bytes());
        field(c.label.map_or("?", Label::as_str).as_bytes());
        field(c.unknown.text.as_bytes());
        for k in &c.known {
            field(k.text.as_bytes());
        }
        field(b"");
    }
    hex::encode(h.finalize())
}

#[derive(Serialize)]
struct FingerprintInput<'a> {
    config: &'a VerifierConfig,
    seed: u64,
    corpus: String,
}

/// SHA-256 of the canonical JSON of config, run seed and corpus digest.
pub fn fingerprint(config: &VerifierConfig, seed: u64, corpus: &Corpus) -> String {
    let input = FingerprintInput {
        config,
        seed,
        corpus: corpus_digest(corpus),
    };
    sha256_hex(&serde_json::to_vec(&input).expect("config serializes"))
}

impl EvaluationReport {
    pub fn new(config: &VerifierConfig, corpus: &Corpus, seed: u64, scores: &[CaseScore]) -> Self {
        let rows: Vec<ReportRow> = corpus
            .cases
            .iter()
            .zip(scores)
            .map(|(c, s)| ReportRow {
                case_id: c.id.clone(),
                raw: s.raw,
                similarity: s.similarity,
                decision: s.decision,
                label: c.label,
            })
            .collect();
        let decisions: Vec<_> = rows.iter().map(|r| (r.decision, r.label)).collect();
        let scored: Vec<_> = rows
            .iter()
            .filter_map(|r| r.label.map(|l| (r.similarity, l)))
            .collect();
        EvaluationReport {
            method: config.method(),
            corpus: corpus.name.clone(),
            partition: corpus.partition,
            seed,
            accuracy: accuracy(&decisions),
            auc: auc(&scored).ok(),
            rows,
            fingerprint: fingerprint(config, seed, corpus),
        }
    }

    /// `case_id score similarity decision label`, one row per case.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("case_id\tscore\tsimilarity\tdecision\tlabel\n");
        for r in &self.rows {
            let label = r.label.map_or("?", Label::as_str);
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.case_id, r.raw, r.similarity, r.decision, label
            )
            .unwrap();
        }
        out
    }

    /// One summary row; see [`SUMMARY_HEADER`].
    pub fn summary_row(&self, representation: &str) -> String {
        let metric = |m: Option<f64>| m.map_or_else(|| "NA".to_string(), |v| format!("{v:.4}"));
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            self.method,
            self.corpus,
            representation,
            metric(self.accuracy),
            metric(self.auc),
            self.fingerprint
        )
    }
}

pub const SUMMARY_HEADER: &str = "method\tcorpus\trepresentation\taccuracy\tauc\tfingerprint\n";
