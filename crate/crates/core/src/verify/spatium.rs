//! Spatium-L1: frequent-token distance compared against sampled impostors.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::case::{ImpostorPool, VerificationCase};
use super::VerifyError;
use crate::text::{fold_case, tokenize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatiumParams {
    /// Most frequent tokens of D_A used as features.
    pub features: usize,
    pub rounds: usize,
    /// Share of the features drawn in each round.
    pub feature_fraction: f64,
    /// Impostors drawn in each round.
    pub impostors: usize,
}

impl Default for SpatiumParams {
    fn default() -> Self {
        SpatiumParams {
            features: 200,
            rounds: 100,
            feature_fraction: 0.5,
            impostors: 10,
        }
    }
}

/// Lower-cased tokens of a text.
pub fn word_tokens(text: &str) -> Vec<String> {
    tokenize(text)
        .iter()
        .map(|s| fold_case(s.slice(text)))
        .collect()
}

pub(crate) fn counts(tokens: &[String]) -> HashMap<&str, usize> {
    let mut m: HashMap<&str, usize> = HashMap::new();
    for t in tokens {
        *m.entry(t.as_str()).or_default() += 1;
    }
    m
}

/// The `m` most frequent tokens; equal counts ordered lexicographically.
pub fn most_frequent(tokens: &[String], m: usize) -> Vec<String> {
    let mut ranked: Vec<(&str, usize)> = counts(tokens).into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(m)
        .map(|(t, _)| t.to_string())
        .collect()
}

/// Relative frequency of each feature in a text.
pub fn relative_frequencies(tokens: &[String], features: &[String]) -> Vec<f64> {
    let c = counts(tokens);
    let total = tokens.len().max(1) as f64;
    features
        .iter()
        .map(|f| c.get(f.as_str()).copied().unwrap_or(0) as f64 / total)
        .collect()
}

fn l1(a: &[f64], b: &[f64], idx: &[usize]) -> f64 {
    idx.iter().map(|&i| (a[i] - b[i]).abs()).sum()
}

/// Fraction of sampled (round, impostor) comparisons in which the impostor is
/// strictly farther from D_unk than D_A is.
pub fn spatium_score(
    case: &VerificationCase,
    pool: &ImpostorPool,
    params: &SpatiumParams,
    seed: u64,
) -> Result<f64, VerifyError> {
    if pool.is_empty() {
        return Err(VerifyError::EmptyImpostorPool {
            case: case.id.clone(),
        });
    }
    let known_tokens = word_tokens(&case.known_text());
    let features = most_frequent(&known_tokens, params.features);
    if features.is_empty() {
        return Err(VerifyError::EmptyDocument {
            case: case.id.clone(),
        });
    }
    let unk = relative_frequencies(&word_tokens(&case.unknown.text), &features);
    let known = relative_frequencies(&known_tokens, &features);
    let impostors: Vec<Vec<f64>> = pool
        .documents
        .iter()
        .map(|d| relative_frequencies(&word_tokens(&d.text), &features))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_round_features = ((features.len() as f64 * params.feature_fraction).ceil() as usize)
        .clamp(1, features.len());
    let per_round_impostors = params.impostors.clamp(1, impostors.len());
    let (mut farther, mut total) = (0usize, 0usize);
    for _ in 0..params.rounds.max(1) {
        let mut idx = sample(&mut rng, features.len(), per_round_features).into_vec();
        idx.sort_unstable();
        let d_known = l1(&unk, &known, &idx);
        for i in sample(&mut rng, impostors.len(), per_round_impostors) {
            if l1(&unk, &impostors[i], &idx) > d_known {
                farther += 1;
            }
            total += 1;
        }
    }
    Ok(farther as f64 / total as f64)
}
