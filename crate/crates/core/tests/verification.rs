//! Verifiers and the evaluation harness on synthetic corpora.

mod common;

use std::fs;

use common::{author_text, smoke_corpus, Style};
use posnoise::harness::{
    default_grid, evaluate, grid_search, median_of_runs, validate_corpus, CorpusManifest, Violation,
};
use posnoise::verify::{
    train, Calibration, Corpus, Document, Hyperparams, Label, Method, Partition,
    ProfileDissimilarity, ProfileParams, UnmaskingParams, VerificationCase, VerifierConfig,
};

#[test]
fn every_method_scores_the_smoke_corpus() {
    let train_corpus = smoke_corpus(Partition::Train, 1);
    let test = smoke_corpus(Partition::Test, 2);
    for method in Method::ALL {
        let params = match method {
            Method::Unmasking => Hyperparams::Unmasking(UnmaskingParams {
                u1: 30,
                u2: 2,
                u3: 4,
                u4: 20,
                u5: 3,
            }),
            _ => method.default_params(),
        };
        let config = if method.is_trained() {
            train(params, &train_corpus, 5).unwrap()
        } else {
            VerifierConfig::untrained(params, 5)
        };
        let report = evaluate(&config, &test, 5).unwrap();
        assert_eq!(report.rows.len(), test.cases.len());
        for r in &report.rows {
            assert!(
                (0.0..=1.0).contains(&r.similarity),
                "{method}: {}",
                r.similarity
            );
            assert_eq!(r.decision, Label::from_decision(r.similarity > 0.5));
        }
        let again = evaluate(&config, &test, 5).unwrap();
        assert_eq!(report, again, "{method} is not deterministic");
    }
}

#[test]
fn config_round_trips_through_json() {
    let train_corpus = smoke_corpus(Partition::Train, 1);
    let config = train(Method::Coav.default_params(), &train_corpus, 3).unwrap();
    let json = serde_json::to_string(&config).unwrap();
    let back: VerifierConfig = serde_json::from_str(&json).unwrap();
    assert_eq!(back, config);
}

#[test]
fn trained_method_without_calibration_fails() {
    let test = smoke_corpus(Partition::Test, 2);
    let config = VerifierConfig::untrained(Method::Coav.default_params(), 1);
    assert!(evaluate(&config, &test, 1).is_err());
}

#[test]
fn calibration_fixed_point() {
    let cal = Calibration::fit(
        &[0.1, 0.2, 0.8, 0.9],
        &[
            Some(Label::N),
            Some(Label::N),
            Some(Label::Y),
            Some(Label::Y),
        ],
    )
    .unwrap();
    assert_eq!(cal.normalize(cal.theta), 0.5);
    assert!(cal.normalize(0.9) > 0.5);
    assert!(cal.normalize(0.1) < 0.5);
}

#[test]
fn profile_grid_search_prefers_a_working_point() {
    let train_corpus = smoke_corpus(Partition::Train, 1);
    let grid: Vec<Hyperparams> = [2, 3]
        .into_iter()
        .flat_map(|n| {
            ProfileDissimilarity::ALL.into_iter().map(move |d| {
                Hyperparams::ProfCng(ProfileParams {
                    profile_unknown: 500,
                    profile_known: 500,
                    n,
                    dissimilarity: d,
                })
            })
        })
        .collect();
    let result = grid_search(&grid, &train_corpus, 1).unwrap();
    assert_eq!(result.points.len(), grid.len());
    assert!(result.accuracy >= 0.9);
    for p in &result.points {
        let (acc, _) = p.outcome.as_ref().unwrap();
        assert!(*acc <= result.accuracy);
    }
}

#[test]
fn default_grids_have_expected_sizes() {
    assert_eq!(default_grid(Method::Unmasking).len(), 1728);
    assert_eq!(default_grid(Method::ProfCng).len(), 900);
    assert_eq!(default_grid(Method::Coav).len(), 6);
}

#[test]
fn median_of_runs_rejects_even_counts() {
    let test = smoke_corpus(Partition::Test, 2);
    assert!(median_of_runs(&Method::Occav.default_params(), None, &test, 4, 0).is_err());
}

#[test]
fn manifest_round_trip_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: String| fs::write(dir.path().join(name), text).unwrap();
    write("u1.txt", author_text(Style::VowelHeavy, 1, 50));
    write("k1.txt", author_text(Style::VowelHeavy, 2, 50));
    write("u2.txt", author_text(Style::ConsonantHeavy, 3, 50));
    write("k2.txt", author_text(Style::VowelHeavy, 4, 50));
    let manifest_path = dir.path().join("test.tsv");
    fs::write(
        &manifest_path,
        "c1\tY\tu1.txt\tk1.txt\tann\nc2\tN\tu2.txt\tk2.txt\tbo\n",
    )
    .unwrap();

    let manifest = CorpusManifest::load(&manifest_path, Partition::Test).unwrap();
    let corpus = manifest.load_corpus().unwrap();
    assert_eq!(corpus.cases.len(), 2);
    assert_eq!(
        corpus.cases[0].known[0].text,
        author_text(Style::VowelHeavy, 2, 50)
    );
    assert!(validate_corpus(&manifest, &[]).is_empty());

    let train_path = dir.path().join("train.tsv");
    fs::write(
        &train_path,
        "t1\tY\tk1.txt\tu1.txt\tann\nt2\tN\tu2.txt\tk2.txt\tcy\n",
    )
    .unwrap();
    let other = CorpusManifest::load(&train_path, Partition::Train).unwrap();
    let violations = validate_corpus(&manifest, &[&other]);
    assert!(
        violations
            .iter()
            .any(|v| matches!(v, Violation::AuthorOverlap { .. })),
        "{violations:?}"
    );

    fs::remove_file(dir.path().join("k2.txt")).unwrap();
    let err = manifest.load_corpus().unwrap_err().to_string();
    assert!(err.contains("k2.txt"), "{err}");
}

#[test]
fn nncd_prefers_the_true_author() {
    let unk = author_text(Style::VowelHeavy, 10, 200);
    let mut cases = Vec::new();
    for (i, style) in [
        Style::VowelHeavy,
        Style::ConsonantHeavy,
        Style::ConsonantHeavy,
    ]
    .into_iter()
    .enumerate()
    {
        let known = Document::new(format!("k{i}"), author_text(style, 20 + i as u64, 200));
        let unk_doc = Document::new(
            format!("u{i}"),
            if i == 0 {
                unk.clone()
            } else {
                author_text(style, 30 + i as u64, 200)
            },
        );
        cases.push(
            VerificationCase::new(format!("c{i}"), unk_doc, vec![known], Some(Label::Y))
                .unwrap()
                .with_author(style.name().to_string() + &i.to_string()),
        );
    }
    let corpus = Corpus::new("nncd", Partition::Test, cases);
    let report = evaluate(
        &VerifierConfig::untrained(Method::Nncd.default_params(), 0),
        &corpus,
        0,
    )
    .unwrap();
    assert_eq!(report.rows[0].decision, Label::Y);
}
