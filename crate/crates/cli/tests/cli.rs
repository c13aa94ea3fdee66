use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_posnoise"))
}

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn version_names_pattern_list() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("pattern list"), "{text}");
}

#[test]
fn mask_with_builtin_tagger_writes_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.txt");
    let output = dir.path().join("b.txt");
    fs::write(&input, "I'd like to see the harbour at dawn.").unwrap();
    let out = run(&[
        "mask",
        "--method",
        "posnoise",
        "--tagger",
        "builtin",
        "--in",
        s(&input),
        "--out",
        s(&output),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let masked = fs::read_to_string(&output).unwrap();
    assert!(masked.starts_with("I'd like to see the"), "{masked}");
    assert!(stderr(&out).contains("fingerprint"));
}

#[test]
fn mask_reproduces_reference_sentences() {
    let dir = tempfile::tempdir().unwrap();
    let output = dir.path().join("pos.txt");
    let out = run(&[
        "mask",
        "--method",
        "posnoise",
        "--tags",
        s(&fixture("sentences/tagged.tsv")),
        "--in",
        s(&fixture("sentences/raw.txt")),
        "--out",
        s(&output),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        fs::read_to_string(&output).unwrap(),
        fs::read_to_string(fixture("sentences/posnoise_expected.txt")).unwrap()
    );

    let output = dir.path().join("dv.txt");
    let out = run(&[
        "mask",
        "--method",
        "dv-sa",
        "--wordlist",
        s(&fixture("sentences/wordlist.txt")),
        "--in",
        s(&fixture("sentences/raw.txt")),
        "--out",
        s(&output),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        fs::read_to_string(&output).unwrap(),
        fs::read_to_string(fixture("sentences/textdistortion_expected.txt")).unwrap()
    );
}

#[test]
fn unknown_method_is_a_usage_error() {
    let out = run(&["mask", "--method", "foo", "--in", "a.txt", "--out", "b.txt"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "verify", "--method", "foo", "--corpus", "m.tsv", "--report", "r.tsv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["mask", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_names_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("u.txt"), "some unknown text").unwrap();
    let manifest = dir.path().join("test.tsv");
    fs::write(&manifest, "c1\tY\tu.txt\tgone.txt\n").unwrap();
    let report = dir.path().join("r.tsv");
    let out = run(&[
        "verify",
        "--method",
        "occav",
        "--corpus",
        s(&manifest),
        "--report",
        s(&report),
        "--runs",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("gone.txt"), "{}", stderr(&out));
    assert!(!report.exists());
}

fn write_corpus(dir: &Path, name: &str, cases: &[(&str, &str, &str, &str, &str)]) -> PathBuf {
    let mut manifest = String::new();
    for (id, label, unk, known, author) in cases {
        let (u, k) = (format!("{name}-{id}-u.txt"), format!("{name}-{id}-k.txt"));
        fs::write(dir.join(&u), unk).unwrap();
        fs::write(dir.join(&k), known).unwrap();
        manifest.push_str(&format!("{id}\t{label}\t{u}\t{k}\t{author}\n"));
    }
    let path = dir.join(format!("{name}.tsv"));
    fs::write(&path, manifest).unwrap();
    path
}

const VOWELY: &str = "aua eio oia uae aea iou ouo eae aia oeo uia iea aoe";
const CONSONANTY: &str = "brt skl mnd prst grk tvl drn chk pwl smt frt blk";

fn repeat(s: &str, n: usize) -> String {
    vec![s; n].join(" ")
}

#[test]
fn verify_writes_report_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (v, c) = (repeat(VOWELY, 6), repeat(CONSONANTY, 6));
    let test = write_corpus(
        dir.path(),
        "test",
        &[
            ("a", "Y", &v, &(v.clone() + " aia"), "x"),
            ("b", "N", &c, &(v.clone() + " oeo"), "y"),
            ("c", "Y", &c, &(c.clone() + " brt"), "z"),
            ("d", "N", &v, &(c.clone() + " skl"), "w"),
        ],
    );
    let report = dir.path().join("report.tsv");
    let summary = dir.path().join("summary.tsv");
    let out = run(&[
        "verify",
        "--method",
        "nncd",
        "--corpus",
        s(&test),
        "--report",
        s(&report),
        "--summary",
        s(&summary),
        "--runs",
        "3",
        "--jobs",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&report).unwrap();
    assert!(
        text.starts_with("case_id\tscore\tsimilarity\tdecision\tlabel\n"),
        "{text}"
    );
    assert_eq!(text.lines().count(), 5);
    let summary_text = fs::read_to_string(&summary).unwrap();
    assert!(
        summary_text.lines().nth(1).unwrap().starts_with("NNCD\t"),
        "{summary_text}"
    );

    let again = dir.path().join("report1.tsv");
    let out = run(&[
        "verify",
        "--method",
        "nncd",
        "--corpus",
        s(&test),
        "--report",
        s(&again),
        "--runs",
        "3",
        "--jobs",
        "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(fs::read_to_string(&again).unwrap(), text);
}

#[test]
fn compress_size_reports_bits() {
    let out = run(&[
        "compress-size",
        "--order",
        "3",
        "--in",
        s(&fixture("text/notice.txt")),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.chars().any(|c| c.is_ascii_digit()), "{text}");
    let out = run(&[
        "compress-size",
        "--order",
        "99",
        "--in",
        s(&fixture("text/notice.txt")),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analyze_k_writes_curve() {
    let dir = tempfile::tempdir().unwrap();
    let wl = dir.path().join("wl.txt");
    let ann = dir.path().join("ann.tsv");
    let curve = dir.path().join("curve.tsv");
    fs::write(&wl, "the\nof\nship\nand\nsea\n").unwrap();
    fs::write(
        &ann,
        "the\tstyle\nof\tstyle\nship\ttopic\nand\tstyle\nsea\ttopic\n",
    )
    .unwrap();
    let out = run(&[
        "analyze-k",
        "--wordlist",
        s(&wl),
        "--annotation",
        s(&ann),
        "--out",
        s(&curve),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(&curve).unwrap();
    assert!(
        text.starts_with("k\tcum_style\tcum_topic\tdiff\n"),
        "{text}"
    );
    assert_eq!(text.lines().count(), 6);
    let all = format!("{}{}", String::from_utf8_lossy(&out.stdout), stderr(&out));
    assert!(all.contains('2'), "{all}");
}

#[test]
fn validate_corpus_flags_imbalance() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_corpus(
        dir.path(),
        "good",
        &[
            ("a", "Y", "one text", "two text", "p"),
            ("b", "N", "three", "four", "q"),
        ],
    );
    let out = run(&["validate-corpus", "--corpus", s(&good)]);
    assert!(out.status.success(), "{}", stderr(&out));

    let bad = write_corpus(
        dir.path(),
        "bad",
        &[
            ("a", "Y", "five", "six", "r"),
            ("b", "Y", "seven", "eight", "s"),
        ],
    );
    let out = run(&["validate-corpus", "--corpus", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let all = format!("{}{}", String::from_utf8_lossy(&out.stdout), stderr(&out));
    assert!(
        all.to_lowercase().contains("imbalance") || all.contains("balanced"),
        "{all}"
    );
}

#[test]
fn residual_tokens_counts_content_words() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.txt");
    let out_path = dir.path().join("r.tsv");
    fs::write(&input, "the # Ø the harbour harbour .").unwrap();
    let out = run(&["residual-tokens", "--in", s(&input), "--out", s(&out_path)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        fs::read_to_string(&out_path).unwrap(),
        "token\tcount\nharbour\t2\n"
    );
}
