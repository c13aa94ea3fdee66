//! The six verification methods and their calibration.
//!
//! Every method reduces a case to a *signature* (one or more numbers). Trained
//! methods (COAV, ProfCNG, Unmasking) collapse the signature to a raw score
//! and normalize it with a [`Calibration`] learned on a training corpus; the
//! others produce a similarity in `[0, 1]` directly. The decision is always
//! `similarity > 0.5`.

mod calibration;
mod case;
mod compression;
mod profile;
mod spatium;
mod unmasking;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use calibration::{fit_threshold, Calibration, CalibrationError, MetaModel};
pub use case::{
    CaseError, Corpus, Document, ImpostorPool, Label, Partition, UnknownLabel, UnknownPartition,
    VerificationCase,
};
pub use compression::{coav_raw, coav_score, nncd_score, occav_score};
pub use profile::{
    profcng_raw, profcng_score, Profile, ProfileDissimilarity, ProfileParams, UnknownDissimilarity,
};
pub use spatium::{most_frequent, relative_frequencies, spatium_score, word_tokens, SpatiumParams};
pub use unmasking::{curve_features, unmasking_curve, unmasking_score, UnmaskingParams};

use crate::compress::ModelOrder;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("method needs a calibration trained on a training corpus")]
    MissingCalibration,
    #[error("case {case}: impostor pool is empty")]
    EmptyImpostorPool { case: String },
    #[error("case {case}: document {doc} yields no character n-grams")]
    ProfileTooSmall { case: String, doc: String },
    #[error("case {case}: only {chunks} chunks per side, need {needed}")]
    TooShort {
        case: String,
        chunks: usize,
        needed: usize,
    },
    #[error("case {case}: empty document")]
    EmptyDocument { case: String },
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error("run count must be odd, got {0}")]
    EvenRunCount(usize),
    #[error("invalid hyperparameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Coav,
    Occav,
    Nncd,
    ProfCng,
    Spatium,
    Unmasking,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Coav,
        Method::Occav,
        Method::Nncd,
        Method::ProfCng,
        Method::Spatium,
        Method::Unmasking,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Coav => "COAV",
            Method::Occav => "OCCAV",
            Method::Nncd => "NNCD",
            Method::ProfCng => "ProfCNG",
            Method::Spatium => "Spatium",
            Method::Unmasking => "Unmasking",
        }
    }

    /// Whether the method needs a calibration from labelled training cases.
    pub fn is_trained(self) -> bool {
        matches!(self, Method::Coav | Method::ProfCng | Method::Unmasking)
    }

    pub fn default_params(self) -> Hyperparams {
        match self {
            Method::Coav => Hyperparams::Coav {
                order: ModelOrder::default(),
            },
            Method::Occav => Hyperparams::Occav {
                order: ModelOrder::default(),
            },
            Method::Nncd => Hyperparams::Nncd {
                order: ModelOrder::default(),
            },
            Method::ProfCng => Hyperparams::ProfCng(ProfileParams::default()),
            Method::Spatium => Hyperparams::Spatium(SpatiumParams::default()),
            Method::Unmasking => Hyperparams::Unmasking(UnmaskingParams::default()),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown method {0:?} (expected coav, occav, nncd, profcng, spatium or unmasking)")]
pub struct UnknownMethod(pub String);

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, UnknownMethod> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownMethod(s.to_string()))
    }
}

/// Method choice together with its hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Hyperparams {
    Coav {
        order: ModelOrder,
    },
    Occav {
        order: ModelOrder,
    },
    Nncd {
        order: ModelOrder,
    },
    #[serde(rename = "profcng")]
    ProfCng(ProfileParams),
    Spatium(SpatiumParams),
    Unmasking(UnmaskingParams),
}

impl Hyperparams {
    pub fn method(&self) -> Method {
        match self {
            Hyperparams::Coav { .. } => Method::Coav,
            Hyperparams::Occav { .. } => Method::Occav,
            Hyperparams::Nncd { .. } => Method::Nncd,
            Hyperparams::ProfCng(_) => Method::ProfCng,
            Hyperparams::Spatium(_) => Method::Spatium,
            Hyperparams::Unmasking(_) => Method::Unmasking,
        }
    }

    /// Numeric tuple used to order grid points.
    pub fn tuple(&self) -> Vec<f64> {
        match self {
            Hyperparams::Coav { order }
            | Hyperparams::Occav { order }
            | Hyperparams::Nncd { order } => {
                vec![order.get() as f64]
            }
            Hyperparams::ProfCng(p) => vec![
                p.profile_unknown as f64,
                p.profile_known as f64,
                p.n as f64,
                p.dissimilarity as u8 as f64,
            ],
            Hyperparams::Spatium(p) => vec![
                p.features as f64,
                p.rounds as f64,
                p.feature_fraction,
                p.impostors as f64,
            ],
            Hyperparams::Unmasking(p) => [p.u1, p.u2, p.u3, p.u4, p.u5]
                .iter()
                .map(|&v| v as f64)
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = |m: &str| Err(VerifyError::InvalidParams(m.to_string()));
        match self {
            Hyperparams::ProfCng(p) if p.n == 0 || p.profile_unknown == 0 || p.profile_known == 0 => {
                bad("profile sizes and n must be positive")
            }
            Hyperparams::Spatium(p)
                if p.features == 0
                    || p.rounds == 0
                    || p.impostors == 0
                    || !(p.feature_fraction > 0.0 && p.feature_fraction <= 1.0) =>
            {
                bad("spatium needs positive features, rounds and impostors and a feature fraction in (0, 1]")
            }
            Hyperparams::Unmasking(p) if p.u1 == 0 || p.u3 == 0 || p.u4 == 0 || p.u5 < 2 => {
                bad("unmasking needs u1, u3, u4 > 0 and u5 >= 2")
            }
            _ => Ok(()),
        }
    }
}

/// A method ready to score: hyperparameters, calibration (trained methods
/// only) and the base seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifierConfig {
    pub params: Hyperparams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<Calibration>,
    #[serde(default)]
    pub seed: u64,
}

impl VerifierConfig {
    pub fn untrained(params: Hyperparams, seed: u64) -> Self {
        VerifierConfig {
            params,
            calibration: None,
            seed,
        }
    }

    pub fn method(&self) -> Method {
        self.params.method()
    }
}

/// Per-case seed derived from the run seed and the case id, so a case's
/// randomness does not depend on its position in the corpus.
pub fn case_seed(seed: u64, case_id: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in case_id.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Signature of case `index`: the similarity itself for untrained methods, the
/// uncalibrated score (or curve features) for trained ones.
pub fn signature(
    params: &Hyperparams,
    corpus: &Corpus,
    index: usize,
    seed: u64,
) -> Result<Vec<f64>, VerifyError> {
    let case = &corpus.cases[index];
    let seed = case_seed(seed, &case.id);
    Ok(match params {
        Hyperparams::Coav { order } => vec![coav_raw(case, *order)?],
        Hyperparams::Occav { order } => vec![occav_score(case, *order)?],
        Hyperparams::Nncd { order } => vec![nncd_score(
            case,
            &ImpostorPool::for_case(corpus, index),
            *order,
        )?],
        Hyperparams::ProfCng(p) => vec![profcng_raw(case, p)?],
        Hyperparams::Spatium(p) => vec![spatium_score(
            case,
            &ImpostorPool::for_case(corpus, index),
            p,
            seed,
        )?],
        Hyperparams::Unmasking(p) => curve_features(&unmasking_curve(case, p, seed)?),
    })
}

/// Signatures of every case, computed in parallel and returned in case order.
pub fn signatures(
    params: &Hyperparams,
    corpus: &Corpus,
    seed: u64,
) -> Result<Vec<Vec<f64>>, VerifyError> {
    params.validate()?;
    (0..corpus.cases.len())
        .into_par_iter()
        .map(|i| signature(params, corpus, i, seed))
        .collect()
}

/// Fits the calibration of a trained method on labelled cases; untrained
/// methods are returned as they are.
pub fn train(
    params: Hyperparams,
    corpus: &Corpus,
    seed: u64,
) -> Result<VerifierConfig, VerifyError> {
    let sigs = signatures(&params, corpus, seed)?;
    train_from_signatures(params, &sigs, corpus, seed)
}

pub(crate) fn train_from_signatures(
    params: Hyperparams,
    sigs: &[Vec<f64>],
    corpus: &Corpus,
    seed: u64,
) -> Result<VerifierConfig, VerifyError> {
    let calibration = match params.method() {
        Method::Unmasking => Some(Calibration::fit_meta(sigs, &corpus.labels())?),
        m if m.is_trained() => {
            let raw: Vec<f64> = sigs.iter().map(|s| s[0]).collect();
            Some(Calibration::fit(&raw, &corpus.labels())?)
        }
        _ => None,
    };
    Ok(VerifierConfig {
        params,
        calibration,
        seed,
    })
}

/// Outcome for one case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CaseScore {
    pub raw: f64,
    pub similarity: f64,
    pub decision: Label,
}

/// Turns a signature into raw score, similarity and decision.
pub fn score_signature(config: &VerifierConfig, sig: &[f64]) -> Result<CaseScore, VerifyError> {
    let (raw, similarity) = if config.method().is_trained() {
        let cal = config
            .calibration
            .as_ref()
            .ok_or(VerifyError::MissingCalibration)?;
        let raw = cal.raw(sig);
        (raw, cal.normalize(raw))
    } else {
        (sig[0], sig[0])
    };
    Ok(CaseScore {
        raw,
        similarity,
        decision: Label::from_decision(similarity > 0.5),
    })
}

/// Scores every case of a corpus with `seed`.
pub fn score_corpus(
    config: &VerifierConfig,
    corpus: &Corpus,
    seed: u64,
) -> Result<Vec<CaseScore>, VerifyError> {
    if config.method().is_trained() && config.calibration.is_none() {
        return Err(VerifyError::MissingCalibration);
    }
    signatures(&config.params, corpus, seed)?
        .iter()
        .map(|s| score_signature(config, s))
        .collect()
}
