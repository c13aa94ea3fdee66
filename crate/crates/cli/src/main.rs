use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::OnceLock;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use posnoise::compress::{compressed_size, ModelOrder};
use posnoise::distortion::{
    choose_k, dvma_mask, dvsa_mask, k_curve, k_curve_tsv, FrequencyWordList, StyleTopicAnnotation,
};
use posnoise::harness::{
    default_grid, grid_search, median_of_runs, run_median_of_runs, sha256_hex, validate_corpus,
    CorpusManifest, EvaluationReport, SUMMARY_HEADER,
};
use posnoise::lexicon::{PatternLexicon, PATTERN_LIST_VERSION};
use posnoise::posnoise::posnoise_mask;
use posnoise::probe::{
    probe_function_words_only, probe_topic, residual_tokens, residual_tsv, TopicCorpus,
};
use posnoise::text::{parse_tagged, LexiconTagger, Tagger};
use posnoise::verify::{Hyperparams, Method, Partition, VerifierConfig};

fn version() -> &'static str {
    static V: OnceLock<String> = OnceLock::new();
    V.get_or_init(|| {
        format!(
            "{} (pattern list {PATTERN_LIST_VERSION})",
            env!("CARGO_PKG_VERSION")
        )
    })
}

#[derive(Parser)]
#[command(name = "posnoise", version = version(), about = "Topic masking and authorship verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mask a text with POSNoise or TextDistortion.
    Mask(MaskArgs),
    /// Choose the TextDistortion k from a style/topic annotated word list.
    AnalyzeK(AnalyzeKArgs),
    /// Print the PPM-compressed size of a file in bits.
    CompressSize(CompressSizeArgs),
    /// Run a verifier over a corpus and write a per-case report.
    Verify(VerifyArgs),
    /// Search hyperparameters on a training corpus.
    GridSearch(GridSearchArgs),
    /// Cross-validated topic classification accuracy of a representation.
    ProbeTopic(ProbeTopicArgs),
    /// Count tokens that are neither retained function words nor mask symbols.
    ResidualTokens(ResidualArgs),
    /// Check a corpus manifest for balance, hygiene and author overlap.
    ValidateCorpus(ValidateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MaskMethod {
    Posnoise,
    DvSa,
    DvMa,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TaggerChoice {
    Builtin,
}

#[derive(Args)]
struct MaskArgs {
    #[arg(long, value_enum)]
    method: MaskMethod,
    /// Pattern list (defaults to the bundled list).
    #[arg(long)]
    patterns: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "builtin")]
    tagger: TaggerChoice,
    /// Externally tagged tokens for the input (overrides --tagger).
    #[arg(long)]
    tags: Option<PathBuf>,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Per-token decisions (POSNoise only).
    #[arg(long)]
    provenance: Option<PathBuf>,
    /// Frequency-ranked word list (TextDistortion).
    #[arg(long)]
    wordlist: Option<PathBuf>,
    /// Number of word-list entries to keep (defaults to all).
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct AnalyzeKArgs {
    #[arg(long)]
    wordlist: PathBuf,
    #[arg(long)]
    annotation: PathBuf,
    /// Where to write the cumulative style/topic curve.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompressSizeArgs {
    #[arg(long, default_value_t = 7)]
    order: usize,
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,
    /// Case manifest to evaluate.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_parser = parse_partition, default_value = "test")]
    partition: Partition,
    /// Verifier configuration (JSON), e.g. from grid-search.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Training manifest used to calibrate trained methods in every run.
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long, default_value_t = 11)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: PathBuf,
    /// Summary table to append a row to.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long, default_value = "original")]
    representation: String,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct GridSearchArgs {
    #[arg(long, value_parser = parse_method)]
    method: Method,
    #[arg(long)]
    train: PathBuf,
    /// Best configuration (JSON).
    #[arg(long)]
    out: PathBuf,
    /// JSON array of hyperparameter objects (defaults to the built-in grid).
    #[arg(long)]
    grid: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Representation {
    Original,
    Posnoise,
    DvSa,
}

#[derive(Args)]
struct ProbeTopicArgs {
    /// Directory with one sub-directory per label, or a `path<TAB>label` manifest.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "original")]
    representation: Representation,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    patterns: Option<PathBuf>,
    #[arg(long)]
    wordlist: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    /// Use only pattern-list tokens as features.
    #[arg(long)]
    function_words_only: bool,
    /// Per-fold accuracies.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ResidualArgs {
    /// Text files to count.
    #[arg(long = "in", required_unless_present = "corpus")]
    inputs: Vec<PathBuf>,
    /// Topic corpus (directory or manifest) to count instead.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    patterns: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_parser = parse_partition, default_value = "test")]
    partition: Partition,
    /// Manifests of the other partitions, checked for shared authors.
    #[arg(long)]
    other: Vec<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
        .map_err(|e: posnoise::verify::UnknownMethod| e.to_string())
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse()
        .map_err(|e: posnoise::verify::UnknownPartition| e.to_string())
}

fn read(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot write to {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn log_fingerprint(fingerprint: &str) {
    eprintln!("fingerprint: {fingerprint}");
}

fn run_fingerprint(value: serde_json::Value) -> String {
    sha256_hex(value.to_string().as_bytes())
}

fn load_lexicon(path: Option<&Path>) -> Result<PatternLexicon> {
    match path {
        Some(p) => PatternLexicon::parse(&read(p)?).with_context(|| format!("in {}", p.display())),
        None => Ok(PatternLexicon::bundled().clone()),
    }
}

fn load_wordlist(path: Option<&Path>, k: Option<usize>) -> Result<FrequencyWordList> {
    let Some(path) = path else {
        bail!("TextDistortion needs --wordlist");
    };
    let wl =
        FrequencyWordList::parse(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    Ok(match k {
        Some(k) => wl.with_k(k)?,
        None => wl,
    })
}

fn with_jobs<T>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T>
where
    T: Send,
{
    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn mask(args: MaskArgs) -> Result<()> {
    let text = read(&args.input)?;
    let masked = match args.method {
        MaskMethod::Posnoise => {
            let lex = load_lexicon(args.patterns.as_deref())?;
            let docs = match &args.tags {
                Some(tags) => parse_tagged(&text, &read(tags)?)
                    .with_context(|| format!("in {}", tags.display()))?,
                None => match args.tagger {
                    TaggerChoice::Builtin => vec![LexiconTagger::bundled().tag(&text)],
                },
            };
            let mut out = String::with_capacity(text.len());
            let mut prov = String::from("doc\ttoken\tstart\tsurface\tupos\tdecision\n");
            for (d, doc) in docs.iter().enumerate() {
                let m = posnoise_mask(doc, &lex);
                out.push_str(&m.text);
                for (i, (tok, dec)) in doc.tokens().iter().zip(&m.provenance).enumerate() {
                    prov.push_str(&format!(
                        "{d}\t{i}\t{}\t{}\t{}\t{dec}\n",
                        tok.start, tok.surface, tok.upos
                    ));
                }
            }
            if let Some(p) = &args.provenance {
                write_atomic(p, prov.as_bytes())?;
            }
            out
        }
        MaskMethod::DvSa | MaskMethod::DvMa => {
            if args.provenance.is_some() {
                bail!("--provenance is only available for posnoise");
            }
            let wl = load_wordlist(args.wordlist.as_deref(), args.k)?;
            match args.method {
                MaskMethod::DvSa => dvsa_mask(&text, &wl),
                _ => dvma_mask(&text, &wl),
            }
        }
    };
    write_atomic(&args.out, masked.as_bytes())?;
    log_fingerprint(&run_fingerprint(json!({
        "command": "mask",
        "method": format!("{:?}", args.method),
        "input": sha256_hex(text.as_bytes()),
        "output": sha256_hex(masked.as_bytes()),
        "k": args.k,
    })));
    Ok(())
}

fn analyze_k(args: AnalyzeKArgs) -> Result<()> {
    let wl = FrequencyWordList::parse(&read(&args.wordlist)?)
        .with_context(|| format!("in {}", args.wordlist.display()))?;
    let ann = StyleTopicAnnotation::parse(&read(&args.annotation)?, Some(&wl))
        .with_context(|| format!("in {}", args.annotation.display()))?;
    let Some(k) = choose_k(&ann) else {
        bail!("annotation is empty");
    };
    if let Some(out) = &args.out {
        write_atomic(out, k_curve_tsv(&k_curve(&ann)).as_bytes())?;
    }
    println!("{k}");
    Ok(())
}

fn compress_size(args: CompressSizeArgs) -> Result<()> {
    let order = ModelOrder::new(args.order)?;
    let data = std::fs::read(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    println!("{}", compressed_size(&data, order));
    Ok(())
}

fn load_corpus(path: &Path, partition: Partition) -> Result<posnoise::verify::Corpus> {
    let manifest = CorpusManifest::load(path, partition)?;
    Ok(manifest.load_corpus()?)
}

fn verify(args: VerifyArgs) -> Result<()> {
    let config: Option<VerifierConfig> = match &args.config {
        Some(p) => Some(
            serde_json::from_str(&read(p)?)
                .with_context(|| format!("invalid config {}", p.display()))?,
        ),
        None => None,
    };
    let params: Hyperparams = match (&config, args.method) {
        (Some(c), Some(m)) if c.method() != m => {
            bail!("--method {m} does not match the {} config", c.method())
        }
        (Some(c), _) => c.params.clone(),
        (None, Some(m)) => m.default_params(),
        (None, None) => bail!("either --method or --config is required"),
    };
    let test = load_corpus(&args.corpus, args.partition)?;
    let train = match &args.train {
        Some(p) => Some(load_corpus(p, Partition::Train)?),
        None => None,
    };
    let trained_config = config.filter(|c| c.calibration.is_some() && train.is_none());
    if params.method().is_trained() && trained_config.is_none() && train.is_none() {
        bail!(
            "{} needs a calibrated --config or a --train manifest",
            params.method()
        );
    }

    let report: EvaluationReport = with_jobs(args.jobs, || match &trained_config {
        Some(c) => run_median_of_runs(args.runs, args.seed, |seed| {
            Ok(posnoise::harness::evaluate(c, &test, seed)?)
        }),
        None => median_of_runs(&params, train.as_ref(), &test, args.runs, args.seed),
    })??;

    write_atomic(&args.report, report.to_tsv().as_bytes())?;
    if let Some(summary) = &args.summary {
        let mut table = match std::fs::read_to_string(summary) {
            Ok(existing) if !existing.is_empty() => existing,
            _ => SUMMARY_HEADER.to_string(),
        };
        table.push_str(&report.summary_row(&args.representation));
        write_atomic(summary, table.as_bytes())?;
    }
    let metric = |m: Option<f64>| m.map_or_else(|| "NA".to_string(), |v| format!("{v:.4}"));
    eprintln!(
        "{} on {} ({}): accuracy {} auc {} (seed {})",
        report.method,
        report.corpus,
        report.partition,
        metric(report.accuracy),
        metric(report.auc),
        report.seed
    );
    log_fingerprint(&report.fingerprint);
    Ok(())
}

fn grid(args: GridSearchArgs) -> Result<()> {
    let grid: Vec<Hyperparams> = match &args.grid {
        Some(p) => serde_json::from_str(&read(p)?)
            .with_context(|| format!("invalid grid {}", p.display()))?,
        None => default_grid(args.method),
    };
    if let Some(bad) = grid.iter().find(|g| g.method() != args.method) {
        bail!(
            "grid contains a {} point, expected {}",
            bad.method(),
            args.method
        );
    }
    let train = load_corpus(&args.train, Partition::Train)?;
    let result = with_jobs(args.jobs, || grid_search(&grid, &train, args.seed))??;
    for p in &result.points {
        if let Err(e) = &p.outcome {
            eprintln!("skipped {}: {e}", serde_json::to_string(&p.params)?);
        }
    }
    let json = serde_json::to_string_pretty(&result.best)?;
    write_atomic(&args.out, format!("{json}\n").as_bytes())?;
    eprintln!(
        "best of {} points: accuracy {:.4} auc {}",
        result.points.len(),
        result.accuracy,
        result
            .auc
            .map_or_else(|| "NA".to_string(), |v| format!("{v:.4}"))
    );
    log_fingerprint(&run_fingerprint(
        json!({ "command": "grid-search", "best": result.best }),
    ));
    Ok(())
}

fn probe(args: ProbeTopicArgs) -> Result<()> {
    let corpus = TopicCorpus::load(&args.corpus)?;
    let lex = load_lexicon(args.patterns.as_deref())?;
    let (corpus, tag) = match args.representation {
        Representation::Original => (corpus, "original".to_string()),
        Representation::Posnoise => (
            corpus.map_texts(|t| posnoise_mask(&LexiconTagger::bundled().tag(t), &lex).text),
            "posnoise".to_string(),
        ),
        Representation::DvSa => {
            let wl = load_wordlist(args.wordlist.as_deref(), args.k)?;
            let tag = format!("textdistortion({})", wl.k());
            (corpus.map_texts(|t| dvsa_mask(t, &wl)), tag)
        }
    };
    let result = with_jobs(args.jobs, || {
        if args.function_words_only {
            probe_function_words_only(&corpus, &lex, args.folds, args.seed, &tag)
        } else {
            probe_topic(&corpus, args.folds, args.seed, &tag)
        }
    })??;
    if let Some(out) = &args.out {
        let mut tsv = String::from("representation\tfold\taccuracy\n");
        for (i, a) in result.fold_accuracies.iter().enumerate() {
            tsv.push_str(&format!("{}\t{i}\t{a:.4}\n", result.representation));
        }
        write_atomic(out, tsv.as_bytes())?;
    }
    println!("{}\t{:.4}", result.representation, result.mean_accuracy);
    log_fingerprint(&run_fingerprint(json!({
        "command": "probe-topic",
        "representation": result.representation,
        "folds": args.folds,
        "seed": args.seed,
        "function_words_only": args.function_words_only,
        "texts": sha256_hex(corpus.texts().concat().as_bytes()),
    })));
    Ok(())
}

fn residual(args: ResidualArgs) -> Result<()> {
    let lex = load_lexicon(args.patterns.as_deref())?;
    let mut docs: Vec<String> = args.inputs.iter().map(|p| read(p)).collect::<Result<_>>()?;
    if let Some(c) = &args.corpus {
        docs.extend(TopicCorpus::load(c)?.texts().iter().cloned());
    }
    let table = residual_tokens(&docs, &lex);
    write_atomic(&args.out, residual_tsv(&table).as_bytes())?;
    eprintln!("{} distinct residual tokens", table.len());
    log_fingerprint(&run_fingerprint(json!({
        "command": "residual-tokens",
        "texts": sha256_hex(docs.concat().as_bytes()),
    })));
    Ok(())
}

/// Returns whether the corpus is clean.
fn validate(args: ValidateArgs) -> Result<bool> {
    let manifest = CorpusManifest::load(&args.corpus, args.partition)?;
    let other_partition = match args.partition {
        Partition::Train => Partition::Test,
        Partition::Test => Partition::Train,
    };
    let others: Vec<CorpusManifest> = args
        .other
        .iter()
        .map(|p| CorpusManifest::load(p, other_partition))
        .collect::<Result<_, _>>()?;
    let refs: Vec<&CorpusManifest> = others.iter().collect();
    let violations = validate_corpus(&manifest, &refs);
    for v in &violations {
        println!("{v}");
    }
    eprintln!(
        "{} cases, {} violations",
        manifest.entries.len(),
        violations.len()
    );
    Ok(violations.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Mask(a) => mask(a)?,
        Command::AnalyzeK(a) => analyze_k(a)?,
        Command::CompressSize(a) => compress_size(a)?,
        Command::Verify(a) => verify(a)?,
        Command::GridSearch(a) => grid(a)?,
        Command::ProbeTopic(a) => probe(a)?,
        Command::ResidualTokens(a) => residual(a)?,
        Command::ValidateCorpus(a) => return validate(a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
