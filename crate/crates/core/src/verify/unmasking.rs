//! Unmasking: how fast cross-validated accuracy between the chunks of two
//! texts degrades as the most discriminative features are removed.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::calibration::Calibration;
use super::case::VerificationCase;
use super::spatium::{most_frequent, relative_frequencies, word_tokens};
use super::VerifyError;
use crate::linear::{cross_validated_accuracy, SoftmaxRegression, Standardizer, TrainParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UnmaskingParams {
    /// Initial feature set size.
    pub u1: usize,
    /// Features removed per side and iteration.
    pub u2: usize,
    /// Iterations.
    pub u3: usize,
    /// Chunk size in words.
    pub u4: usize,
    /// Cross-validation folds.
    pub u5: usize,
}

impl Default for UnmaskingParams {
    fn default() -> Self {
        UnmaskingParams {
            u1: 100,
            u2: 3,
            u3: 5,
            u4: 50,
            u5: 5,
        }
    }
}

const CLASSIFIER: TrainParams = TrainParams {
    iterations: 100,
    l2: 1.0,
};

fn chunks(tokens: &[String], size: usize) -> Vec<&[String]> {
    tokens.chunks_exact(size.max(1)).collect()
}

/// Accuracy after each elimination round.
pub fn unmasking_curve(
    case: &VerificationCase,
    p: &UnmaskingParams,
    seed: u64,
) -> Result<Vec<f64>, VerifyError> {
    let unk_tokens = word_tokens(&case.unknown.text);
    let known_tokens = word_tokens(&case.known_text());
    let mut unk = chunks(&unk_tokens, p.u4);
    let mut known = chunks(&known_tokens, p.u4);
    let folds = p.u5.max(2);
    if unk.len() < folds || known.len() < folds {
        return Err(VerifyError::TooShort {
            case: case.id.clone(),
            chunks: unk.len().min(known.len()),
            needed: folds,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = unk.len().min(known.len());
    for side in [&mut unk, &mut known] {
        if side.len() > n {
            let mut keep = sample(&mut rng, side.len(), n).into_vec();
            keep.sort_unstable();
            *side = keep.into_iter().map(|i| side[i]).collect();
        }
    }

    let pooled: Vec<String> = unk
        .iter()
        .chain(&known)
        .flat_map(|c| c.iter().cloned())
        .collect();
    let features = most_frequent(&pooled, p.u1);
    let rows: Vec<Vec<f64>> = unk
        .iter()
        .chain(&known)
        .map(|c| relative_frequencies(c, &features))
        .collect();
    let labels: Vec<usize> = (0..2 * n).map(|i| (i >= n) as usize).collect();

    let mut active: Vec<usize> = (0..features.len()).collect();
    let mut curve = Vec::with_capacity(p.u3);
    for _ in 0..p.u3 {
        if active.is_empty() {
            curve.push(0.5);
            continue;
        }
        let x: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| active.iter().map(|&j| r[j]).collect())
            .collect();
        curve.push(cross_validated_accuracy(
            &x, &labels, 2, folds, CLASSIFIER, &mut rng,
        ));

        let scaler = Standardizer::fit(&x);
        let xs: Vec<Vec<f64>> = x.iter().map(|r| scaler.apply(r)).collect();
        let w = SoftmaxRegression::fit(&xs, &labels, 2, CLASSIFIER).binary_weights();
        let mut order: Vec<usize> = (0..active.len()).collect();
        order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
        let mut drop: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&i| w[i] > 0.0)
            .take(p.u2)
            .collect();
        drop.extend(
            order
                .iter()
                .rev()
                .copied()
                .filter(|&i| w[i] < 0.0)
                .take(p.u2),
        );
        if drop.is_empty() {
            drop = order.into_iter().take(2 * p.u2).collect();
        }
        let mut keep = vec![true; active.len()];
        for i in drop {
            keep[i] = false;
        }
        active = active
            .into_iter()
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(j, _)| j)
            .collect();
    }
    Ok(curve)
}

/// Final accuracy, total drop and mean accuracy of a curve.
pub fn curve_features(curve: &[f64]) -> Vec<f64> {
    let first = curve.first().copied().unwrap_or(0.5);
    let last = curve.last().copied().unwrap_or(0.5);
    let mean = if curve.is_empty() {
        0.5
    } else {
        curve.iter().sum::<f64>() / curve.len() as f64
    };
    vec![last, first - last, mean]
}

pub fn unmasking_score(
    case: &VerificationCase,
    p: &UnmaskingParams,
    calibration: Option<&Calibration>,
    seed: u64,
) -> Result<f64, VerifyError> {
    let cal = calibration.ok_or(VerifyError::MissingCalibration)?;
    let sig = curve_features(&unmasking_curve(case, p, seed)?);
    Ok(cal.normalize(cal.raw(&sig)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::case::Document;
    use rand::Rng;

    fn english(seed: u64, words: usize) -> String {
        const VOCAB: [&str; 24] = [
            "the", "of", "and", "a", "to", "in", "is", "was", "he", "for", "it", "with", "as",
            "his", "on", "be", "at", "by", "house", "river", "old", "man", "walked", "slowly",
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..words)
            .map(|_| VOCAB[rng.random_range(0..VOCAB.len())])
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn digits(seed: u64, words: usize) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..words)
            .map(|_| rng.random_range(0..20).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn case(unk: String, known: String) -> VerificationCase {
        VerificationCase::new(
            "c",
            Document::new("u", unk),
            vec![Document::new("k", known)],
            None,
        )
        .unwrap()
    }

    fn params() -> UnmaskingParams {
        UnmaskingParams {
            u1: 20,
            u2: 2,
            u3: 4,
            u4: 20,
            u5: 5,
        }
    }

    #[test]
    fn same_text_stays_near_chance() {
        let text = english(1, 400);
        let curve = unmasking_curve(&case(text.clone(), text), &params(), 3).unwrap();
        assert_eq!(curve.len(), 4);
        assert!(curve[0] <= 0.75, "{curve:?}");
    }

    #[test]
    fn english_vs_digits_stays_separable() {
        let curve = unmasking_curve(&case(english(1, 400), digits(2, 400)), &params(), 3).unwrap();
        assert!(curve.iter().all(|&a| a >= 0.9), "{curve:?}");
    }

    #[test]
    fn seeded_determinism() {
        let c = case(english(1, 500), english(7, 300));
        assert_eq!(
            unmasking_curve(&c, &params(), 11).unwrap(),
            unmasking_curve(&c, &params(), 11).unwrap()
        );
    }

    #[test]
    fn too_short() {
        let c = case(english(1, 30), english(2, 400));
        assert!(matches!(
            unmasking_curve(&c, &params(), 0),
            Err(VerifyError::TooShort { .. })
        ));
    }

    #[test]
    fn features_of_a_curve() {
        assert_eq!(curve_features(&[1.0, 0.75, 0.5]), vec![0.5, 0.5, 0.75]);
    }
}
