use serde::{Deserialize, Serialize};

use crate::linear::{SoftmaxRegression, Standardizer, TrainParams};

use super::case::Label;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalibrationError {
    #[error("no training scores")]
    Empty,
    #[error("training case {0} has no label")]
    MissingLabel(usize),
    #[error("training scores need both Y and N cases")]
    NeedsBothClasses,
    #[error("training score {0} is not finite")]
    NonFinite(usize),
}

/// Learned decision threshold θ plus the piecewise-linear map sending
/// `[min, θ]` to `[0, 0.5]` and `[θ, max]` to `[0.5, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub theta: f64,
    pub min: f64,
    pub max: f64,
    /// Maps a multi-valued signature to a single raw score.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<MetaModel>,
}

/// Logistic regression over standardized signature features; its raw score
/// is the probability of same authorship.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaModel {
    pub standardizer: Standardizer,
    pub model: SoftmaxRegression,
}

impl MetaModel {
    pub fn fit(signatures: &[Vec<f64>], labels: &[Label]) -> Self {
        let standardizer = Standardizer::fit(signatures);
        let x: Vec<Vec<f64>> = signatures.iter().map(|s| standardizer.apply(s)).collect();
        let y: Vec<usize> = labels.iter().map(|l| l.is_same_author() as usize).collect();
        let model = SoftmaxRegression::fit(&x, &y, 2, TrainParams::default());
        MetaModel {
            standardizer,
            model,
        }
    }

    pub fn raw(&self, signature: &[f64]) -> f64 {
        self.model
            .probabilities(&self.standardizer.apply(signature))[1]
    }
}

fn check(raw: &[f64], labels: &[Option<Label>]) -> Result<Vec<Label>, CalibrationError> {
    if raw.is_empty() {
        return Err(CalibrationError::Empty);
    }
    if let Some(i) = raw.iter().position(|r| !r.is_finite()) {
        return Err(CalibrationError::NonFinite(i));
    }
    let labels: Vec<Label> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| l.ok_or(CalibrationError::MissingLabel(i)))
        .collect::<Result<_, _>>()?;
    if !labels.contains(&Label::Y) || !labels.contains(&Label::N) {
        return Err(CalibrationError::NeedsBothClasses);
    }
    Ok(labels)
}

/// Threshold maximizing training accuracy of `raw > θ`. Candidates are the
/// midpoints between adjacent distinct scores plus one point beyond each end;
/// the smallest candidate wins ties.
pub fn fit_threshold(raw: &[f64], labels: &[Label]) -> f64 {
    let mut values: Vec<f64> = raw.to_vec();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let lo = values[0];
    let hi = values[values.len() - 1];
    let pad = if hi > lo { (hi - lo) / 2.0 } else { 0.5 };
    let mut candidates = vec![lo - pad];
    candidates.extend(values.windows(2).map(|w| w[0] + (w[1] - w[0]) / 2.0));
    candidates.push(hi + pad);

    let mut best = (0usize, candidates[0]);
    for &theta in &candidates {
        let correct = raw
            .iter()
            .zip(labels)
            .filter(|(&r, &l)| (r > theta) == l.is_same_author())
            .count();
        if correct > best.0 {
            best = (correct, theta);
        }
    }
    best.1
}

impl Calibration {
    /// Fits θ on one-dimensional raw scores.
    pub fn fit(raw: &[f64], labels: &[Option<Label>]) -> Result<Self, CalibrationError> {
        let labels = check(raw, labels)?;
        Ok(Self::from_scores(raw, &labels, None))
    }

    /// Fits a meta model on multi-valued signatures, then θ on its output.
    pub fn fit_meta(
        signatures: &[Vec<f64>],
        labels: &[Option<Label>],
    ) -> Result<Self, CalibrationError> {
        if signatures.iter().flatten().any(|v| !v.is_finite()) {
            let i = signatures
                .iter()
                .position(|s| s.iter().any(|v| !v.is_finite()))
                .unwrap_or(0);
            return Err(CalibrationError::NonFinite(i));
        }
        let first: Vec<f64> = signatures
            .iter()
            .map(|s| s.first().copied().unwrap_or(0.0))
            .collect();
        let labels = check(&first, labels)?;
        let meta = MetaModel::fit(signatures, &labels);
        let raw: Vec<f64> = signatures.iter().map(|s| meta.raw(s)).collect();
        Ok(Self::from_scores(&raw, &labels, Some(meta)))
    }

    fn from_scores(raw: &[f64], labels: &[Label], meta: Option<MetaModel>) -> Self {
        let theta = fit_threshold(raw, labels);
        let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
        let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Calibration {
            theta,
            min,
            max,
            meta,
        }
    }

    /// Collapses a signature to the raw score compared against θ.
    pub fn raw(&self, signature: &[f64]) -> f64 {
        match &self.meta {
            Some(m) => m.raw(signature),
            None => signature[0],
        }
    }

    pub fn normalize(&self, raw: f64) -> f64 {
        let theta = self.theta;
        if raw == theta {
            0.5
        } else if raw < theta {
            if theta > self.min {
                0.5 * ((raw - self.min) / (theta - self.min)).clamp(0.0, 1.0)
            } else {
                0.0
            }
        } else if self.max > theta {
            // strictly above 0.5 whenever raw > θ
            let s = 0.5 + 0.5 * ((raw - theta) / (self.max - theta)).clamp(0.0, 1.0);
            if s > 0.5 {
                s
            } else {
                0.5 + f64::EPSILON
            }
        } else {
            1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(s: &str) -> Vec<Option<Label>> {
        s.chars()
            .map(|c| Some(if c == 'Y' { Label::Y } else { Label::N }))
            .collect()
    }

    #[test]
    fn separable_scores_get_midpoint_threshold() {
        let c = Calibration::fit(&[0.1, 0.2, 0.8, 0.9], &labels("NNYY")).unwrap();
        assert!((c.theta - 0.5).abs() < 1e-12);
        assert_eq!(c.normalize(0.5), 0.5);
        assert_eq!(c.normalize(0.1), 0.0);
        assert_eq!(c.normalize(0.9), 1.0);
        assert!(c.normalize(0.3) < 0.5 && c.normalize(0.6) > 0.5);
    }

    #[test]
    fn ties_pick_smallest_candidate() {
        // N Y N Y: thresholds between 1|2 and 3|4 both give 3/4 correct
        let c = Calibration::fit(&[1.0, 2.0, 3.0, 4.0], &labels("NYNY")).unwrap();
        assert_eq!(c.theta, 1.5);
    }

    #[test]
    fn raw_equal_to_theta_maps_to_half() {
        let c = Calibration::fit(&[0.0, 1.0, 5.0, 7.0], &labels("NNYY")).unwrap();
        assert_eq!(c.normalize(c.theta), 0.5);
    }

    #[test]
    fn errors() {
        assert_eq!(Calibration::fit(&[], &[]), Err(CalibrationError::Empty));
        assert_eq!(
            Calibration::fit(&[1.0, 2.0], &labels("YY")),
            Err(CalibrationError::NeedsBothClasses)
        );
        assert_eq!(
            Calibration::fit(&[1.0, 2.0], &[Some(Label::Y), None]),
            Err(CalibrationError::MissingLabel(1))
        );
        assert_eq!(
            Calibration::fit(&[1.0, f64::NAN], &labels("YN")),
            Err(CalibrationError::NonFinite(1))
        );
    }

    #[test]
    fn meta_model_orders_signatures() {
        let sigs: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![i as f64, 10.0 - i as f64, 1.0])
            .collect();
        let lab: Vec<Option<Label>> = (0..10)
            .map(|i| Some(if i >= 5 { Label::Y } else { Label::N }))
            .collect();
        let c = Calibration::fit_meta(&sigs, &lab).unwrap();
        let correct = sigs
            .iter()
            .zip(&lab)
            .filter(|(s, l)| (c.normalize(c.raw(s)) > 0.5) == (l.unwrap() == Label::Y))
            .count();
        assert_eq!(correct, 10);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<Calibration>(&json).unwrap(), c);
    }

    proptest! {
        #[test]
        fn normalize_is_monotone_and_agrees_with_theta(
            raw in proptest::collection::vec(-100.0f64..100.0, 2..30),
            flips in proptest::collection::vec(any::<bool>(), 30),
            probe in proptest::collection::vec(-150.0f64..150.0, 1..20),
        ) {
            let mut lab: Vec<Option<Label>> = raw.iter().zip(&flips).map(|(_, &f)| Some(Label::from_decision(f))).collect();
            lab[0] = Some(Label::Y);
            lab[1] = Some(Label::N);
            let c = Calibration::fit(&raw, &lab).unwrap();
            let mut p = probe.clone();
            p.sort_by(f64::total_cmp);
            let s: Vec<f64> = p.iter().map(|&r| c.normalize(r)).collect();
            for w in s.windows(2) {
                prop_assert!(w[0] <= w[1]);
            }
            for (&r, &v) in p.iter().zip(&s) {
                prop_assert!((0.0..=1.0).contains(&v));
                prop_assert_eq!(v > 0.5, r > c.theta);
            }
        }
    }
}
