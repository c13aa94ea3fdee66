//! Corpus manifests, evaluation runs, metrics and grid search.

mod manifest;
mod metrics;
mod report;

use std::cmp::Ordering;

pub use manifest::{validate_corpus, CorpusManifest, ManifestEntry, ManifestError, Violation};
pub use metrics::{accuracy, auc, UndefinedAuc};
pub use report::{
    corpus_digest, fingerprint, sha256_hex, EvaluationReport, ReportRow, SUMMARY_HEADER,
};

use crate::compress::ModelOrder;
use crate::verify::{
    score_corpus, score_signature, signatures, train, train_from_signatures, CaseScore, Corpus,
    Hyperparams, Method, ProfileDissimilarity, ProfileParams, SpatiumParams, UnmaskingParams,
    VerifierConfig, VerifyError,
};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error("grid is empty")]
    EmptyGrid,
}

/// Scores a corpus with a ready configuration.
pub fn evaluate(
    config: &VerifierConfig,
    corpus: &Corpus,
    seed: u64,
) -> Result<EvaluationReport, VerifyError> {
    let scores = score_corpus(config, corpus, seed)?;
    Ok(EvaluationReport::new(config, corpus, seed, &scores))
}

/// Runs `run(seed)` for seeds `seed0..seed0 + runs` and returns the report
/// whose accuracy is the median. Reports are ordered by accuracy, then by run
/// index, and the middle one is taken; nothing is averaged.
pub fn run_median_of_runs<F>(
    runs: usize,
    seed0: u64,
    mut run: F,
) -> Result<EvaluationReport, HarnessError>
where
    F: FnMut(u64) -> Result<EvaluationReport, HarnessError>,
{
    if runs.is_multiple_of(2) {
        return Err(VerifyError::EvenRunCount(runs).into());
    }
    let mut reports = Vec::with_capacity(runs);
    for i in 0..runs {
        reports.push(run(seed0.wrapping_add(i as u64))?);
    }
    let mut order: Vec<usize> = (0..runs).collect();
    let acc = |r: &EvaluationReport| r.accuracy.unwrap_or(f64::NEG_INFINITY);
    order.sort_by(|&a, &b| {
        acc(&reports[a])
            .total_cmp(&acc(&reports[b]))
            .then(a.cmp(&b))
    });
    Ok(reports.swap_remove(order[(runs - 1) / 2]))
}

/// Median-of-runs evaluation where every run retrains on `train_corpus` (if
/// the method is trained) and evaluates on `test`, both with the run's seed.
pub fn median_of_runs(
    params: &Hyperparams,
    train_corpus: Option<&Corpus>,
    test: &Corpus,
    runs: usize,
    seed0: u64,
) -> Result<EvaluationReport, HarnessError> {
    run_median_of_runs(runs, seed0, |seed| {
        let config = match train_corpus {
            Some(t) if params.method().is_trained() => train(params.clone(), t, seed)?,
            _ => VerifierConfig::untrained(params.clone(), seed),
        };
        Ok(evaluate(&config, test, seed)?)
    })
}

/// One evaluated grid point.
#[derive(Clone, Debug)]
pub struct GridPoint {
    pub params: Hyperparams,
    pub outcome: Result<(f64, Option<f64>), VerifyError>,
}

#[derive(Clone, Debug)]
pub struct GridResult {
    pub best: VerifierConfig,
    pub accuracy: f64,
    pub auc: Option<f64>,
    pub points: Vec<GridPoint>,
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Exhaustive search: every point is trained and scored on the training
/// corpus. Best by accuracy, then AUC, then the smallest hyperparameter tuple.
/// Points that fail (e.g. documents too short for a chunk size) are recorded
/// and skipped; if all fail, the first error is returned.
pub fn grid_search(
    grid: &[Hyperparams],
    train_corpus: &Corpus,
    seed: u64,
) -> Result<GridResult, HarnessError> {
    if grid.is_empty() {
        return Err(HarnessError::EmptyGrid);
    }
    let mut points = Vec::with_capacity(grid.len());
    let mut best: Option<(VerifierConfig, f64, Option<f64>)> = None;
    for params in grid {
        let outcome = (|| {
            let sigs = signatures(params, train_corpus, seed)?;
            let config = train_from_signatures(params.clone(), &sigs, train_corpus, seed)?;
            let scores: Vec<CaseScore> = sigs
                .iter()
                .map(|s| score_signature(&config, s))
                .collect::<Result<_, _>>()?;
            let report = EvaluationReport::new(&config, train_corpus, seed, &scores);
            Ok((config, report.accuracy.unwrap_or(0.0), report.auc))
        })();
        match outcome {
            Ok((config, acc, auc)) => {
                let better = match &best {
                    None => true,
                    Some((b, bacc, bauc)) => {
                        let by_acc = acc.total_cmp(bacc);
                        let by_auc = auc.unwrap_or(-1.0).total_cmp(&bauc.unwrap_or(-1.0));
                        let by_tuple = lexicographic(&b.params.tuple(), &params.tuple());
                        by_acc.then(by_auc).then(by_tuple) == Ordering::Greater
                    }
                };
                if better {
                    best = Some((config, acc, auc));
                }
                points.push(GridPoint {
                    params: params.clone(),
                    outcome: Ok((acc, auc)),
                });
            }
            Err(e) => points.push(GridPoint {
                params: params.clone(),
                outcome: Err(e),
            }),
        }
    }
    match best {
        Some((best, accuracy, auc)) => Ok(GridResult {
            best,
            accuracy,
            auc,
            points,
        }),
        None => {
            let first = points
                .into_iter()
                .find_map(|p| p.outcome.err())
                .expect("a point failed");
            Err(first.into())
        }
    }
}

/// Default search space of a method.
pub fn default_grid(method: Method) -> Vec<Hyperparams> {
    let orders = || (3..=8).map(|k| ModelOrder::new(k).expect("valid order"));
    match method {
        Method::Coav => orders().map(|order| Hyperparams::Coav { order }).collect(),
        Method::Occav => orders().map(|order| Hyperparams::Occav { order }).collect(),
        Method::Nncd => orders().map(|order| Hyperparams::Nncd { order }).collect(),
        Method::ProfCng => {
            let sizes: Vec<usize> = (1..=10).map(|i| i * 1000).collect();
            let mut grid = Vec::new();
            for &profile_unknown in &sizes {
                for &profile_known in &sizes {
                    for n in 3..=5 {
                        for dissimilarity in ProfileDissimilarity::ALL {
                            grid.push(Hyperparams::ProfCng(ProfileParams {
                                profile_unknown,
                                profile_known,
                                n,
                                dissimilarity,
                            }));
                        }
                    }
                }
            }
            grid
        }
        Method::Spatium => [100, 200, 300]
            .into_iter()
            .map(|features| {
                Hyperparams::Spatium(SpatiumParams {
                    features,
                    ..SpatiumParams::default()
                })
            })
            .collect(),
        Method::Unmasking => {
            let mut grid = Vec::new();
            for u1 in [5, 15, 25, 35, 50, 75, 100, 150] {
                for u2 in [2, 3, 5] {
                    for u3 in [3, 5, 7] {
                        for u4 in [5, 15, 25, 35, 50, 75] {
                            for u5 in [3, 5, 7, 10] {
                                grid.push(Hyperparams::Unmasking(UnmaskingParams {
                                    u1,
                                    u2,
                                    u3,
                                    u4,
                                    u5,
                                }));
                            }
                        }
                    }
                }
            }
            grid
        }
    }
}
