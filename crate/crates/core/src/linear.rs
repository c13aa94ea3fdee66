//! Multinomial logistic regression trained by deterministic full-batch
//! gradient descent.
//!
//! Objective: mean cross-entropy + `l2 / (2n) · ‖W‖²` (intercepts are not
//! penalised). The step size is the inverse of a curvature bound,
//! `½·λ_max(XᵀX/n) + l2/n`, with λ_max found by power iteration, so every run
//! with the same data takes the same path.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainParams {
    pub iterations: usize,
    pub l2: f64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            iterations: 500,
            l2: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxRegression {
    /// `classes × features`, row-major.
    weights: Vec<f64>,
    bias: Vec<f64>,
    features: usize,
    classes: usize,
}

/// A feature row the optimizer can consume.
pub trait FeatureRow {
    fn dot(&self, w: &[f64]) -> f64;
    /// `g += a · self`
    fn add_scaled(&self, a: f64, g: &mut [f64]);
}

impl FeatureRow for Vec<f64> {
    fn dot(&self, w: &[f64]) -> f64 {
        self.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    fn add_scaled(&self, a: f64, g: &mut [f64]) {
        for (gj, xj) in g.iter_mut().zip(self) {
            *gj += a * xj;
        }
    }
}

/// `(feature index, value)` pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseRow(pub Vec<(usize, f64)>);

impl FeatureRow for SparseRow {
    fn dot(&self, w: &[f64]) -> f64 {
        self.0.iter().map(|&(j, v)| w[j] * v).sum()
    }

    fn add_scaled(&self, a: f64, g: &mut [f64]) {
        for &(j, v) in &self.0 {
            g[j] += a * v;
        }
    }
}

/// Largest eigenvalue of `XᵀX / n` for rows augmented with a constant 1,
/// by a fixed number of power iterations.
fn curvature<R: FeatureRow>(x: &[R], d: usize) -> f64 {
    let n = x.len() as f64;
    let mut v = vec![1.0 / ((d + 1) as f64).sqrt(); d + 1];
    let mut lambda = 0.0;
    for _ in 0..30 {
        let mut next = vec![0.0; d + 1];
        for r in x {
            let xv = r.dot(&v[..d]) + v[d];
            r.add_scaled(xv / n, &mut next[..d]);
            next[d] += xv / n;
        }
        let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm;
        v = next.into_iter().map(|a| a / norm).collect();
    }
    lambda
}

impl SoftmaxRegression {
    /// Fits on dense rows `x` (all of equal width) with labels in `0..classes`.
    pub fn fit(x: &[Vec<f64>], y: &[usize], classes: usize, params: TrainParams) -> Self {
        let d = x.first().map_or(0, Vec::len);
        Self::fit_rows(x, d, y, classes, params)
    }

    /// Fits on rows of width `d`, dense or sparse.
    pub fn fit_rows<R: FeatureRow>(
        x: &[R],
        d: usize,
        y: &[usize],
        classes: usize,
        params: TrainParams,
    ) -> Self {
        assert_eq!(x.len(), y.len());
        assert!(classes >= 2);
        let n = x.len();
        let mut model = SoftmaxRegression {
            weights: vec![0.0; classes * d],
            bias: vec![0.0; classes],
            features: d,
            classes,
        };
        if n == 0 {
            return model;
        }
        let lr = 1.0 / (0.5 * 1.05 * curvature(x, d) + params.l2 / n as f64 + 1e-12);

        let mut grad_w = vec![0.0; classes * d];
        let mut grad_b = vec![0.0; classes];
        let mut probs = vec![0.0; classes];
        for _ in 0..params.iterations {
            grad_w.iter_mut().for_each(|g| *g = 0.0);
            grad_b.iter_mut().for_each(|g| *g = 0.0);
            for (row, &label) in x.iter().zip(y) {
                model.logits_into(row, &mut probs);
                softmax(&mut probs);
                for c in 0..classes {
                    let err = probs[c] - if c == label { 1.0 } else { 0.0 };
                    if err == 0.0 {
                        continue;
                    }
                    grad_b[c] += err;
                    row.add_scaled(err, &mut grad_w[c * d..(c + 1) * d]);
                }
            }
            let inv_n = 1.0 / n as f64;
            let decay = params.l2 * inv_n;
            for (w, g) in model.weights.iter_mut().zip(&grad_w) {
                *w -= lr * (g * inv_n + decay * *w);
            }
            for (b, g) in model.bias.iter_mut().zip(&grad_b) {
                *b -= lr * g * inv_n;
            }
        }
        model
    }

    fn logits_into<R: FeatureRow>(&self, row: &R, out: &mut [f64]) {
        let d = self.features;
        for (c, o) in out.iter_mut().enumerate() {
            *o = self.bias[c] + row.dot(&self.weights[c * d..(c + 1) * d]);
        }
    }

    /// Most probable class of a dense or sparse row; the lowest index wins ties.
    pub fn predict_row<R: FeatureRow>(&self, row: &R) -> usize {
        let mut logits = vec![0.0; self.classes];
        self.logits_into(row, &mut logits);
        argmax(&logits)
    }

    pub fn probabilities(&self, row: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.classes];
        self.logits_into(&row.to_vec(), &mut out);
        softmax(&mut out);
        out
    }

    /// Most probable class; the lowest index wins ties.
    pub fn predict(&self, row: &[f64]) -> usize {
        argmax(&self.probabilities(row))
    }

    /// For two classes: per-feature weight pointing towards class 1.
    pub fn binary_weights(&self) -> Vec<f64> {
        assert_eq!(self.classes, 2);
        let d = self.features;
        (0..d)
            .map(|j| self.weights[d + j] - self.weights[j])
            .collect()
    }
}

fn softmax(v: &mut [f64]) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for o in v.iter_mut() {
        *o = (*o - max).exp();
        sum += *o;
    }
    v.iter_mut().for_each(|o| *o /= sum);
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (c, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = c;
        }
    }
    best
}

/// Column-wise z-scoring fitted on one set of rows and applied to others.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Self {
        let d = rows.first().map_or(0, Vec::len);
        let n = rows.len().max(1) as f64;
        let mut mean = vec![0.0; d];
        for r in rows {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v / n;
            }
        }
        let mut var = vec![0.0; d];
        for r in rows {
            for ((s, v), m) in var.iter_mut().zip(r).zip(&mean) {
                *s += (v - m) * (v - m) / n;
            }
        }
        let scale = var
            .into_iter()
            .map(|v| if v > 1e-24 { v.sqrt() } else { 1.0 })
            .collect();
        Standardizer { mean, scale }
    }

    pub fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((v, m), s)| (v - m) / s)
            .collect()
    }
}

/// Fold index for every item: each class is shuffled, then items are dealt
/// round-robin, continuing from class to class, so every fold's class counts
/// differ from the global proportions by at most one.
pub fn stratified_folds<R: Rng + ?Sized>(
    labels: &[usize],
    folds: usize,
    rng: &mut R,
) -> Vec<usize> {
    let classes = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for c in 0..classes {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        members.shuffle(rng);
        for i in members {
            assignment[i] = next % folds;
            next += 1;
        }
    }
    assignment
}

/// Accuracy pooled over all held-out items of a stratified k-fold split.
/// Features are standardized on each training split.
pub fn cross_validated_accuracy<R: Rng + ?Sized>(
    x: &[Vec<f64>],
    y: &[usize],
    classes: usize,
    folds: usize,
    params: TrainParams,
    rng: &mut R,
) -> f64 {
    let assignment = stratified_folds(y, folds, rng);
    let mut correct = 0;
    for f in 0..folds {
        let train: Vec<usize> = (0..x.len()).filter(|&i| assignment[i] != f).collect();
        let test: Vec<usize> = (0..x.len()).filter(|&i| assignment[i] == f).collect();
        if test.is_empty() {
            continue;
        }
        let rows: Vec<Vec<f64>> = train.iter().map(|&i| x[i].clone()).collect();
        let scaler = Standardizer::fit(&rows);
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| scaler.apply(r)).collect();
        let labels: Vec<usize> = train.iter().map(|&i| y[i]).collect();
        let model = SoftmaxRegression::fit(&rows, &labels, classes, params);
        correct += test
            .iter()
            .filter(|&&i| model.predict(&scaler.apply(&x[i])) == y[i])
            .count();
    }
    correct as f64 / x.len() as f64
}
